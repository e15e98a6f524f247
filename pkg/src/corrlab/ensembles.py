"""N-round ensemble scenarios: exact enumeration and seeded Monte Carlo.

Each scenario runs N i.i.d. rounds per trial and reports collective
variables, the per-component averages (1/N)*sum of +1/-1 round outcomes.
Exact mode computes the full joint pmf of the collectives as rationals by
N-fold convolution of the single-round pmf; Monte Carlo mode samples
trials with reproducible per-(seed, scenario, choice) random streams.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .boxes import JointReadoutModel
from .errors import InvariantViolation
from .quantum import ghz_state, joint_probabilities, outcome_tuples

EXACT_MAX_ROUNDS = 24
# Round records are kept for traces only below this many total outcomes.
KEEP_ROUNDS_BUDGET = 10**7
_SAMPLE_CHUNK = 1 << 16


class ScenarioKind(Enum):
    PR_BOX = "pr-box"
    TSIRELSON = "tsirelson"
    GHZ = "ghz"


class RunMode(Enum):
    EXACT = "exact"
    MONTE_CARLO = "mc"


_KIND_STREAM = {ScenarioKind.PR_BOX: 0, ScenarioKind.TSIRELSON: 1, ScenarioKind.GHZ: 2}
_JAMMING_STREAM = 3
_CHOICE_INDEX = {"u": 0, "p": 1}


@dataclass(frozen=True)
class ScenarioSpec:
    """Configuration for one ensemble run.

    ``sender_choice`` is the signaling party's setting label: Alice's
    unprimed/primed observable for the bipartite scenarios, Jim's x/y
    basis for the three-party one.
    """

    kind: ScenarioKind
    n_rounds: int
    sender_choice: str = "u"
    trials: int = 100_000
    seed: int = 0
    mode: RunMode = RunMode.EXACT
    keep_rounds: bool | None = None

    def __post_init__(self):
        if self.n_rounds < 1:
            raise ValueError("n_rounds must be at least 1")
        if self.mode is RunMode.EXACT and self.n_rounds > EXACT_MAX_ROUNDS:
            raise ValueError(f"exact mode supports at most {EXACT_MAX_ROUNDS} rounds")
        if self.sender_choice not in _CHOICE_INDEX:
            raise ValueError("sender_choice must be 'u' or 'p'")
        if self.mode is RunMode.MONTE_CARLO and self.trials < 1:
            raise ValueError("trials must be positive")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit in 64 bits")

    @property
    def keep_rounds_resolved(self) -> bool:
        if self.keep_rounds is not None:
            return self.keep_rounds
        return self.n_rounds * self.trials <= KEEP_ROUNDS_BUDGET


def snap_dyadic(p: float, max_exp: int = 30, tol: float = 1e-12) -> Fraction:
    """Round a Born-rule float to the nearest dyadic rational.

    The per-round probabilities of every scenario here are exact multiples
    of 2^-3, computed to a few ulps, so the float must sit within ``tol``
    of the snapped value.  The tolerance is far below the 2^-31 lattice
    half-spacing, so garbage like 0.3 is rejected rather than silently
    rounded.
    """
    scale = 1 << max_exp
    snapped = Fraction(round(p * scale), scale)
    if abs(float(snapped) - p) > tol:
        raise InvariantViolation(f"probability {p!r} is not dyadic within {tol}")
    return snapped


def snap_pmf(pmf: Mapping[tuple[int, ...], float]) -> dict[tuple[int, ...], Fraction]:
    """Snap a float pmf to exact dyadic rationals, dropping zero entries."""
    out = {}
    for outcome, p in pmf.items():
        q = snap_dyadic(float(p))
        if q:
            out[outcome] = q
    total = sum(out.values())
    if total != 1:
        raise InvariantViolation(f"snapped pmf sums to {total}, not 1")
    return out


def convolve_iid_rounds(
    round_pmf: Mapping[tuple[int, ...], Fraction], n_rounds: int
) -> dict[tuple[int, ...], Fraction]:
    """Exact pmf of the componentwise sum of n_rounds i.i.d. outcome tuples.

    Works over integer weights on a common denominator, so the result is
    exact for any N the support size allows.
    """
    denom = 1
    for p in round_pmf.values():
        denom = math.lcm(denom, p.denominator)
    weights = {out: p.numerator * (denom // p.denominator) for out, p in round_pmf.items()}
    k = len(next(iter(round_pmf)))
    acc: dict[tuple[int, ...], int] = {(0,) * k: 1}
    for _ in range(n_rounds):
        nxt: dict[tuple[int, ...], int] = defaultdict(int)
        for sums, w in acc.items():
            for out, rw in weights.items():
                nxt[tuple(s + o for s, o in zip(sums, out))] += w * rw
        acc = dict(nxt)
    total = denom**n_rounds
    return {sums: Fraction(w, total) for sums, w in acc.items()}


@dataclass(frozen=True, eq=False)
class ExactDistribution:
    """Joint pmf of collective variables with exact rational probabilities.

    Support points are tuples of Fractions on the lattice {-1 + 2k/N};
    probabilities sum to exactly 1.
    """

    labels: tuple[str, ...]
    support: tuple[tuple[Fraction, ...], ...]
    probs: tuple[Fraction, ...]
    n_rounds: int

    def __post_init__(self):
        if len(self.support) != len(self.probs):
            raise ValueError("support and probability lengths differ")
        if sum(self.probs, Fraction(0)) != 1:
            raise ValueError("probabilities must sum to exactly 1")
        for point in self.support:
            if len(point) != len(self.labels):
                raise ValueError("support tuple arity does not match labels")
            for v in point:
                scaled = v * self.n_rounds
                if scaled.denominator != 1 or abs(scaled.numerator) > self.n_rounds:
                    raise ValueError(f"value {v} is off the N={self.n_rounds} lattice")
        order = sorted(range(len(self.support)), key=lambda i: self.support[i])
        object.__setattr__(self, "support", tuple(self.support[i] for i in order))
        object.__setattr__(self, "probs", tuple(self.probs[i] for i in order))

    @classmethod
    def from_mapping(
        cls, mapping: Mapping[tuple[Fraction, ...], Fraction], labels: tuple[str, ...], n_rounds: int
    ) -> "ExactDistribution":
        items = [(k, v) for k, v in mapping.items() if v]
        return cls(
            labels=labels,
            support=tuple(k for k, _ in items),
            probs=tuple(v for _, v in items),
            n_rounds=n_rounds,
        )

    def as_mapping(self) -> dict[tuple[Fraction, ...], Fraction]:
        return dict(zip(self.support, self.probs))

    def probability(self, predicate: Callable[[tuple[Fraction, ...]], bool]) -> Fraction:
        return sum((p for v, p in zip(self.support, self.probs) if predicate(v)), Fraction(0))

    def condition(self, predicate: Callable[[tuple[Fraction, ...]], bool]) -> "ExactDistribution":
        mass = self.probability(predicate)
        if mass == 0:
            raise ValueError("conditioning event has probability zero")
        kept = {v: p / mass for v, p in zip(self.support, self.probs) if predicate(v)}
        return ExactDistribution.from_mapping(kept, self.labels, self.n_rounds)

    def marginal(self, indices: tuple[int, ...]) -> "ExactDistribution":
        acc: dict[tuple[Fraction, ...], Fraction] = defaultdict(Fraction)
        for v, p in zip(self.support, self.probs):
            acc[tuple(v[i] for i in indices)] += p
        labels = tuple(self.labels[i] for i in indices)
        return ExactDistribution.from_mapping(acc, labels, self.n_rounds)

    def mean(self, coeffs: tuple[int | Fraction, ...]) -> Fraction:
        total = Fraction(0)
        for v, p in zip(self.support, self.probs):
            total += p * sum((Fraction(c) * x for c, x in zip(coeffs, v)), Fraction(0))
        return total

    def variance(self, coeffs: tuple[int | Fraction, ...]) -> Fraction:
        m = self.mean(coeffs)
        total = Fraction(0)
        for v, p in zip(self.support, self.probs):
            s = sum((Fraction(c) * x for c, x in zip(coeffs, v)), Fraction(0))
            total += p * s * s
        return total - m * m

    def to_json_obj(self) -> list[dict]:
        return [
            {
                "value": [f"{x.numerator}/{x.denominator}" for x in v],
                "numerator": p.numerator,
                "denominator": p.denominator,
            }
            for v, p in zip(self.support, self.probs)
        ]


@dataclass(frozen=True, eq=False)
class EnsembleRun:
    """Monte Carlo samples of collective variables.

    ``sums`` holds the per-trial componentwise sums of +1/-1 round
    outcomes, so collectives are sums / n_rounds.  ``rounds`` optionally
    retains the full per-round records for trace output.
    """

    labels: tuple[str, ...]
    sums: np.ndarray
    n_rounds: int
    seed: int
    rounds: np.ndarray | None = field(default=None, repr=False)

    @property
    def trials(self) -> int:
        return int(self.sums.shape[0])

    @property
    def collectives(self) -> np.ndarray:
        return self.sums / float(self.n_rounds)

    def empirical(self) -> dict[tuple[Fraction, ...], Fraction]:
        """Empirical pmf of the collectives, exact over the sample."""
        uniq, counts = np.unique(self.sums, axis=0, return_counts=True)
        out = {}
        for row, c in zip(uniq, counts):
            key = tuple(Fraction(int(s), self.n_rounds) for s in row)
            out[key] = Fraction(int(c), self.trials)
        return out

    def mean(self, coeffs: tuple[float, ...]) -> float:
        combo = self.collectives @ np.asarray(coeffs, dtype=float)
        return float(combo.mean())

    def variance(self, coeffs: tuple[float, ...]) -> float:
        if self.trials < 2:
            raise ValueError("variance needs at least 2 samples")
        combo = self.collectives @ np.asarray(coeffs, dtype=float)
        return float(combo.var())


def _stream_rng(seed: int, stream: tuple[int, ...]) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=(seed, *stream)))


def _sample_outcome_rows(
    round_pmf: Mapping[tuple[int, ...], Fraction],
    n_rounds: int,
    trials: int,
    seed: int,
    stream: tuple[int, ...],
    keep_rounds: bool,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Draw (trials, N) round outcomes by inverse CDF in fixed-size chunks."""
    k = len(next(iter(round_pmf)))
    order = [o for o in outcome_tuples(k) if o in round_pmf]
    probs = np.array([float(round_pmf[o]) for o in order])
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    atoms = np.array(order, dtype=np.int8)
    rng = _stream_rng(seed, stream)
    sums = np.empty((trials, k), dtype=np.int64)
    rounds = np.empty((trials, n_rounds, k), dtype=np.int8) if keep_rounds else None
    done = 0
    while done < trials:
        chunk = min(_SAMPLE_CHUNK, trials - done)
        u = rng.random((chunk, n_rounds))
        idx = np.searchsorted(cdf, u, side="right")
        picked = atoms[idx]  # (chunk, N, k)
        sums[done : done + chunk] = picked.sum(axis=1, dtype=np.int64)
        if rounds is not None:
            rounds[done : done + chunk] = picked
        done += chunk
    return sums, rounds


def _run_from_round_pmf(
    spec: ScenarioSpec,
    round_pmf: Mapping[tuple[int, ...], Fraction],
    labels: tuple[str, ...],
    stream: tuple[int, ...],
) -> ExactDistribution | EnsembleRun:
    if spec.mode is RunMode.EXACT:
        sums = convolve_iid_rounds(round_pmf, spec.n_rounds)
        mapping = {
            tuple(Fraction(s, spec.n_rounds) for s in k): p for k, p in sums.items()
        }
        return ExactDistribution.from_mapping(mapping, labels, spec.n_rounds)
    sums, rounds = _sample_outcome_rows(
        round_pmf, spec.n_rounds, spec.trials, spec.seed, stream, spec.keep_rounds_resolved
    )
    return EnsembleRun(labels=labels, sums=sums, n_rounds=spec.n_rounds, seed=spec.seed, rounds=rounds)


def pr_round_pmf(sender_choice: str, readout: JointReadoutModel | None = None) -> dict:
    """Per-round pmf of Bob's jointly read (b, b') pair."""
    model = readout if readout is not None else JointReadoutModel()
    return dict(model.round_pmf(sender_choice))


def run_pr_scenario(
    spec: ScenarioSpec, readout: JointReadoutModel | None = None
) -> ExactDistribution | EnsembleRun:
    """Collective (B, B') statistics for the maximal bipartite box.

    Alice's outcome is unbiased each round; the joint readout model fixes
    Bob's pair from it, so under the unprimed choice B' = B identically
    and under the primed choice B' = -B.
    """
    if spec.kind is not ScenarioKind.PR_BOX:
        raise ValueError("spec.kind must be PR_BOX")
    pmf = pr_round_pmf(spec.sender_choice, readout)
    stream = (_KIND_STREAM[spec.kind], _CHOICE_INDEX[spec.sender_choice])
    return _run_from_round_pmf(spec, pmf, ("B", "B_prime"), stream)


def ghz_round_pmf(sender_choice: str) -> dict[tuple[int, int, int], Fraction]:
    """Born pmf of (a_x, b_x, j) for one triplet, Jim on x ("u") or y ("p")."""
    jim_factor = "X" if sender_choice == "u" else "Y"
    born = joint_probabilities(ghz_state(), ("X", "X", jim_factor))
    return snap_pmf(born)


def run_ghz_scenario(spec: ScenarioSpec) -> ExactDistribution | EnsembleRun:
    """Collective statistics for the three-party ensembles.

    Alice and Bob measure x on every triplet; Jim measures x or y per
    ``sender_choice``.  Components are (A_x, B_x, J_<axis>).
    """
    if spec.kind is not ScenarioKind.GHZ:
        raise ValueError("spec.kind must be GHZ")
    pmf = ghz_round_pmf(spec.sender_choice)
    jim_label = "J_x" if spec.sender_choice == "u" else "J_y"
    stream = (_KIND_STREAM[spec.kind], _CHOICE_INDEX[spec.sender_choice])
    return _run_from_round_pmf(spec, pmf, ("A_x", "B_x", jim_label), stream)


def tsirelson_round_pmf(sender_choice: str, bob_axis: str) -> dict[tuple[int], Fraction]:
    """Bob's exact per-round marginal on a Bell pair.

    Alice measures Z ("u") or X ("p"); Bob measures Z or X per
    ``bob_axis``.  The z and x observables are the sum and difference
    combinations of his two tilted settings, rescaled to unit length.
    """
    if bob_axis not in ("z", "x"):
        raise ValueError("bob_axis must be 'z' or 'x'")
    from .quantum import bell_state

    alice_factor = "Z" if sender_choice == "u" else "X"
    joint = joint_probabilities(bell_state(), (alice_factor, bob_axis.upper()))
    marginal: dict[tuple[int], float] = defaultdict(float)
    for (a, b), p in joint.items():
        marginal[(b,)] += p
    return snap_pmf(marginal)


def run_tsirelson_scenario(
    spec: ScenarioSpec, bob_axis: str = "z"
) -> ExactDistribution | EnsembleRun:
    """Bob's collective for one of his rescaled sum/difference observables."""
    if spec.kind is not ScenarioKind.TSIRELSON:
        raise ValueError("spec.kind must be TSIRELSON")
    pmf = tsirelson_round_pmf(spec.sender_choice, bob_axis)
    stream = (
        _KIND_STREAM[spec.kind],
        _CHOICE_INDEX[spec.sender_choice],
        0 if bob_axis == "z" else 1,
    )
    return _run_from_round_pmf(spec, pmf, (f"bob_{bob_axis}",), stream)


@dataclass(frozen=True, eq=False)
class JammingRecords:
    """Per-triplet outcomes (a_x, b_x, jim) from a jamming run."""

    jim_choice: str
    outcomes: np.ndarray  # (m, 3) of +1/-1, columns (a_x, b_x, j)
    seed: int

    @property
    def labels(self) -> tuple[str, str, str]:
        return ("a_x", "b_x", f"j_{self.jim_choice}")

    @property
    def trials(self) -> int:
        return int(self.outcomes.shape[0])

    @property
    def n_rounds(self) -> int:
        return 1

    def empirical(self) -> dict[tuple[Fraction, ...], Fraction]:
        uniq, counts = np.unique(self.outcomes, axis=0, return_counts=True)
        return {
            tuple(Fraction(int(v)) for v in row): Fraction(int(c), self.trials)
            for row, c in zip(uniq, counts)
        }

    def bin_by_jim(self) -> dict[int, np.ndarray]:
        """Rows with jim outcome +1 and -1 separately."""
        j = self.outcomes[:, 2]
        return {1: self.outcomes[j == 1], -1: self.outcomes[j == -1]}

    def binned_correlations(self) -> dict[int, float | None]:
        out: dict[int, float | None] = {}
        for j, rows in self.bin_by_jim().items():
            if rows.shape[0] == 0:
                out[j] = None
                continue
            out[j] = float(np.mean(rows[:, 0].astype(np.int64) * rows[:, 1]))
        return out

    def overall_correlation(self) -> float:
        a = self.outcomes[:, 0].astype(np.int64)
        return float(np.mean(a * self.outcomes[:, 1]))


def jamming_round_pmf(jim_choice: str) -> dict[tuple[int, int, int], Fraction]:
    """Exact Born pmf of (a_x, b_x, j) with Jim on x or z."""
    if jim_choice not in ("x", "z"):
        raise ValueError("jim_choice must be 'x' or 'z'")
    born = joint_probabilities(ghz_state(), ("X", "X", jim_choice.upper()))
    return snap_pmf(born)


def jamming_exact_distribution(jim_choice: str) -> ExactDistribution:
    """Single-triplet exact distribution, for the exact unary-condition check."""
    pmf = jamming_round_pmf(jim_choice)
    mapping = {tuple(Fraction(o) for o in k): p for k, p in pmf.items()}
    return ExactDistribution.from_mapping(mapping, ("a_x", "b_x", f"j_{jim_choice}"), 1)


def run_jamming_scenario(
    n_rounds: int, jim_choice: str, trials: int, seed: int
) -> JammingRecords:
    """Sample trials*n_rounds independent triplets and record (a_x, b_x, j).

    All three single-site observables commute, so sampling the joint Born
    distribution is equivalent to measuring Jim first and then Alice and
    Bob on the post-measurement state.
    """
    if n_rounds < 1 or trials < 1:
        raise ValueError("n_rounds and trials must be positive")
    pmf = jamming_round_pmf(jim_choice)
    total = n_rounds * trials
    stream = (_JAMMING_STREAM, 0 if jim_choice == "x" else 1)
    sums, _ = _sample_outcome_rows(pmf, 1, total, seed, stream, keep_rounds=False)
    return JammingRecords(jim_choice=jim_choice, outcomes=sums.astype(np.int8), seed=seed)


def scenario_exact_distribution(spec: ScenarioSpec, **kwargs) -> ExactDistribution:
    """Exact-mode result for any scenario kind, regardless of spec.mode."""
    exact_spec = replace(spec, mode=RunMode.EXACT)
    return _dispatch(exact_spec, **kwargs)  # type: ignore[return-value]


def _dispatch(spec: ScenarioSpec, **kwargs) -> ExactDistribution | EnsembleRun:
    if spec.kind is ScenarioKind.PR_BOX:
        return run_pr_scenario(spec, **kwargs)
    if spec.kind is ScenarioKind.GHZ:
        return run_ghz_scenario(spec)
    return run_tsirelson_scenario(spec, **kwargs)
