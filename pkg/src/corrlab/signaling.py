"""Signaling verdicts: can the receiver's statistics reveal the sender's choice?

Runs a scenario under both of the sender's setting choices and compares
the receiver's accessible statistics.  Exact mode compares rational
distributions with a zero threshold; Monte Carlo mode uses a total
variation threshold of 5/sqrt(trials) as a smoke check.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .ensembles import (
    EnsembleRun,
    ExactDistribution,
    JammingRecords,
    RunMode,
    ScenarioKind,
    ScenarioSpec,
    jamming_exact_distribution,
    run_ghz_scenario,
    run_pr_scenario,
    run_tsirelson_scenario,
)
from .errors import LatticeMismatchError


class Statistic(Enum):
    TOTAL_VARIATION = "total_variation"
    VARIANCE_PAIR = "variance_pair"
    CONDITIONAL_PROBABILITY = "conditional_probability"


@dataclass(frozen=True, eq=False)
class SignalingVerdict:
    """Outcome of comparing receiver statistics across the sender's choices.

    ``values`` holds the designated statistic evaluated under choice 0 and
    choice 1; the receiver can tell the choices apart exactly when the two
    values differ by more than ``threshold``.
    """

    scenario: ScenarioKind
    n_rounds: int
    mode: RunMode
    statistic: Statistic
    values: tuple[Fraction | float, Fraction | float]
    distinguishable: bool
    threshold: Fraction | float
    seed: int
    trials: int | None = None
    extras: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "scenario": self.scenario.value,
            "N": self.n_rounds,
            "mode": self.mode.value,
            "statistic": self.statistic.value,
            "values": list(self.values),
            "distinguishable": self.distinguishable,
            "threshold": self.threshold,
            "seed": self.seed,
        }


def _as_mapping(obj) -> tuple[dict, tuple[str, ...] | None, int | None]:
    """Coerce a distribution-like object to (mapping, labels, n_rounds)."""
    if isinstance(obj, ExactDistribution):
        return obj.as_mapping(), obj.labels, obj.n_rounds
    if isinstance(obj, (EnsembleRun, JammingRecords)):
        return obj.empirical(), obj.labels, obj.n_rounds
    if isinstance(obj, Mapping):
        mapping = dict(obj)
        total = sum(mapping.values())
        exact = all(isinstance(p, Fraction) for p in mapping.values())
        if (exact and total != 1) or (not exact and abs(float(total) - 1.0) > 1e-9):
            raise ValueError(f"distribution sums to {total!r}, not 1")
        return mapping, None, None
    raise TypeError(f"cannot interpret {type(obj).__name__} as a distribution")


def total_variation(p, q) -> Fraction | float:
    """(1/2) * sum of |p - q| over the union of supports.

    Exact rationals in, exact rational out.  Distributions carrying
    metadata must agree on their round count and component labels.
    """
    mp, labels_p, n_p = _as_mapping(p)
    mq, labels_q, n_q = _as_mapping(q)
    if n_p is not None and n_q is not None and n_p != n_q:
        raise LatticeMismatchError(f"round counts differ: {n_p} vs {n_q}")
    if labels_p is not None and labels_q is not None and labels_p != labels_q:
        raise LatticeMismatchError(f"components differ: {labels_p} vs {labels_q}")
    zero = Fraction(0)
    acc = zero
    for key in set(mp) | set(mq):
        acc = acc + abs(mp.get(key, zero) - mq.get(key, zero))
    half = acc / 2
    return half if isinstance(half, Fraction) else float(half)


def variance_signature(dist) -> dict[str, Fraction | float]:
    """Variances of the sum and difference of a two-component collective."""
    if isinstance(dist, (ExactDistribution, EnsembleRun)):
        if len(dist.labels) != 2:
            raise ValueError("variance signature needs exactly two components")
        return {
            "var_sum": dist.variance((1, 1)),
            "var_diff": dist.variance((1, -1)),
        }
    raise TypeError(f"cannot compute variances of {type(dist).__name__}")


def marginal_mapping(mapping: Mapping, indices: tuple[int, ...]) -> dict:
    out: dict = defaultdict(Fraction)
    for key, prob in mapping.items():
        out[tuple(key[i] for i in indices)] += prob
    return dict(out)


def _passes(tv, threshold) -> bool:
    if threshold == 0:
        return tv == 0
    return tv < threshold


def unary_condition_check(records_0, records_1, *, threshold=None, include_joint: bool = False) -> dict:
    """Do the receivers' separate statistics hide the remote choice?

    Compares, per component label shared by the two record sets, the
    marginal outcome distributions across the choices.  ``include_joint``
    additionally compares the joint distribution over the shared
    components, which is the stronger collective statistic.
    """
    m0, labels_0, n_0 = _as_mapping(records_0)
    m1, labels_1, n_1 = _as_mapping(records_1)
    if labels_0 is None or labels_1 is None:
        raise ValueError("unary check needs labeled record sets")
    if n_0 != n_1:
        raise LatticeMismatchError(f"round counts differ: {n_0} vs {n_1}")
    common = [lab for lab in labels_0 if lab in labels_1]
    if not common:
        raise ValueError("record sets share no component labels")
    if threshold is None:
        exact = isinstance(records_0, ExactDistribution) and isinstance(records_1, ExactDistribution)
        if exact:
            threshold = Fraction(0)
        else:
            trials = min(getattr(records_0, "trials", 0), getattr(records_1, "trials", 0))
            if trials < 1:
                raise ValueError("need an explicit threshold for unlabeled sample sizes")
            threshold = 5.0 / math.sqrt(trials)
    per_component: dict[str, Fraction | float] = {}
    for lab in common:
        i0 = labels_0.index(lab)
        i1 = labels_1.index(lab)
        tv = total_variation(marginal_mapping(m0, (i0,)), marginal_mapping(m1, (i1,)))
        per_component[lab] = tv
    max_tv = max(per_component.values())
    holds = _passes(max_tv, threshold)
    report = {
        "holds": holds,
        "max_marginal_tv": max_tv,
        "per_component": per_component,
        "threshold": threshold,
    }
    if include_joint:
        idx0 = tuple(labels_0.index(lab) for lab in common)
        idx1 = tuple(labels_1.index(lab) for lab in common)
        joint_tv = total_variation(marginal_mapping(m0, idx0), marginal_mapping(m1, idx1))
        report["joint_tv"] = joint_tv
        report["holds"] = holds and _passes(joint_tv, threshold)
    return report


def jamming_unary_exact() -> dict:
    """Exact unary-condition check for the three-party jamming setup.

    Alice's and Bob's x marginals, and even their joint distribution, are
    identical whether Jim measures x or z, so the check holds with total
    variation exactly zero.
    """
    d_x = jamming_exact_distribution("x")
    d_z = jamming_exact_distribution("z")
    return unary_condition_check(d_x, d_z, include_joint=True)


def _spec_pair(kind: ScenarioKind, n_rounds: int, mode: RunMode, trials: int, seed: int):
    return (
        ScenarioSpec(kind=kind, n_rounds=n_rounds, sender_choice="u", trials=trials, seed=seed, mode=mode),
        ScenarioSpec(kind=kind, n_rounds=n_rounds, sender_choice="p", trials=trials, seed=seed, mode=mode),
    )


def _threshold_for(mode: RunMode, trials: int) -> Fraction | float:
    if mode is RunMode.EXACT:
        return Fraction(0)
    return 5.0 / math.sqrt(trials)


def _mode_value(value, mode: RunMode):
    """Report rationals in exact mode, floats in sampled mode.

    Empirical pmfs are exact over the sample, so their statistics come out
    as Fractions; rendering them as floats keeps sampled reports uniform.
    """
    return value if mode is RunMode.EXACT else float(value)


def pr_verdict(n_rounds: int, mode: RunMode, trials: int = 100_000, seed: int = 0) -> SignalingVerdict:
    """Distinguishability of Alice's choice from Bob's joint (B, B') readout.

    The statistic is total variation against the choice-0 reference, so
    values are (0, TV between the two joint distributions).  The variance
    signatures of B+B' and B-B' under each choice ride along as extras.
    """
    spec_u, spec_p = _spec_pair(ScenarioKind.PR_BOX, n_rounds, mode, trials, seed)
    dist_u = run_pr_scenario(spec_u)
    dist_p = run_pr_scenario(spec_p)
    tv = _mode_value(total_variation(dist_u, dist_p), mode)
    threshold = _threshold_for(mode, trials)
    v0 = Fraction(0) if mode is RunMode.EXACT else 0.0
    extras = {
        "variance_signature": {
            "u": variance_signature(dist_u),
            "p": variance_signature(dist_p),
        }
    }
    return SignalingVerdict(
        scenario=ScenarioKind.PR_BOX,
        n_rounds=n_rounds,
        mode=mode,
        statistic=Statistic.TOTAL_VARIATION,
        values=(v0, tv),
        distinguishable=not _passes(abs(tv - v0), threshold),
        threshold=threshold,
        seed=seed,
        trials=trials if mode is RunMode.MONTE_CARLO else None,
        extras=extras,
    )


def tsirelson_verdict(n_rounds: int, mode: RunMode, trials: int = 100_000, seed: int = 0) -> SignalingVerdict:
    """Distinguishability of Alice's choice from Bob's two collectives.

    Bob's accessible collectives are the z and x ensemble averages (the
    rescaled sum and difference of his two tilted observables); the
    verdict statistic is the worse of the two total variations.
    """
    tvs: dict[str, Fraction | float] = {}
    variances: dict[str, dict] = {}
    for axis in ("z", "x"):
        spec_u, spec_p = _spec_pair(ScenarioKind.TSIRELSON, n_rounds, mode, trials, seed)
        dist_u = run_tsirelson_scenario(spec_u, bob_axis=axis)
        dist_p = run_tsirelson_scenario(spec_p, bob_axis=axis)
        tvs[axis] = _mode_value(total_variation(dist_u, dist_p), mode)
        variances[axis] = {
            "u": dist_u.variance((1,)),
            "p": dist_p.variance((1,)),
        }
    tv = max(tvs.values())
    threshold = _threshold_for(mode, trials)
    v0 = Fraction(0) if mode is RunMode.EXACT else 0.0
    extras = {"tv_per_axis": tvs, "collective_variance": variances}
    return SignalingVerdict(
        scenario=ScenarioKind.TSIRELSON,
        n_rounds=n_rounds,
        mode=mode,
        statistic=Statistic.TOTAL_VARIATION,
        values=(v0, tv),
        distinguishable=not _passes(abs(tv - v0), threshold),
        threshold=threshold,
        seed=seed,
        trials=trials if mode is RunMode.MONTE_CARLO else None,
        extras=extras,
    )


def _ghz_joint_hit_probability(result) -> Fraction:
    """P(A_x = 1 and B_x = 1): every round of both collectives came up +1."""
    one = Fraction(1)
    if isinstance(result, ExactDistribution):
        return result.probability(lambda v: v[0] == one and v[1] == one)
    hits = Fraction(0)
    for key, prob in result.empirical().items():
        if key[0] == one and key[1] == one:
            hits += prob
    return hits


def ghz_verdict(n_rounds: int, mode: RunMode, trials: int = 100_000, seed: int = 0) -> SignalingVerdict:
    """Can Alice and Bob learn Jim's basis choice from their x collectives?

    The statistic follows the rare-event argument: the probability that
    both A_x and B_x come out +1 in every round is 2^-2N whether Jim
    measures x or y.  The total variation over the joint (A_x, B_x)
    distribution rides along as the strongest accessible comparison.
    """
    spec_u, spec_p = _spec_pair(ScenarioKind.GHZ, n_rounds, mode, trials, seed)
    dist_u = run_ghz_scenario(spec_u)
    dist_p = run_ghz_scenario(spec_p)
    p_u = _mode_value(_ghz_joint_hit_probability(dist_u), mode)
    p_p = _mode_value(_ghz_joint_hit_probability(dist_p), mode)
    if isinstance(dist_u, ExactDistribution):
        tv_joint = total_variation(dist_u.marginal((0, 1)), dist_p.marginal((0, 1)))
    else:
        m_u, _, _ = _as_mapping(dist_u)
        m_p, _, _ = _as_mapping(dist_p)
        tv_joint = total_variation(marginal_mapping(m_u, (0, 1)), marginal_mapping(m_p, (0, 1)))
    threshold = _threshold_for(mode, trials)
    extras = {"tv_joint_receiver": _mode_value(tv_joint, mode)}
    return SignalingVerdict(
        scenario=ScenarioKind.GHZ,
        n_rounds=n_rounds,
        mode=mode,
        statistic=Statistic.CONDITIONAL_PROBABILITY,
        values=(p_u, p_p),
        distinguishable=not _passes(abs(p_u - p_p), threshold),
        threshold=threshold,
        seed=seed,
        trials=trials if mode is RunMode.MONTE_CARLO else None,
        extras=extras,
    )


def verdict(
    kind: ScenarioKind,
    n_rounds: int = 6,
    mode: RunMode = RunMode.EXACT,
    trials: int = 100_000,
    seed: int = 0,
) -> SignalingVerdict:
    """Run both sender choices for a scenario and render its verdict."""
    if kind is ScenarioKind.PR_BOX:
        return pr_verdict(n_rounds, mode, trials, seed)
    if kind is ScenarioKind.TSIRELSON:
        return tsirelson_verdict(n_rounds, mode, trials, seed)
    if kind is ScenarioKind.GHZ:
        return ghz_verdict(n_rounds, mode, trials, seed)
    raise ValueError(f"unknown scenario kind {kind!r}")
