"""Independent oracle computations used to cross-check the package.

Everything here is deliberately written from scratch against the same
definitions, using different routes (brute-force enumeration, symbolic
Born rule, GF(2) linear algebra, grid geometry) so the main code and the
tests cannot share a bug.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from fractions import Fraction

import sympy as sp


def pr_bruteforce_joint(n: int, choice: str) -> dict[tuple[Fraction, Fraction], Fraction]:
    """Joint (B, B') pmf by enumerating all 2^n outcome strings.

    Each round Alice's outcome is +1/-1 with probability 1/2; Bob's pair
    is (a, a) under the unprimed choice and (a, -a) under the primed one.
    """
    out: dict[tuple[Fraction, Fraction], Fraction] = defaultdict(Fraction)
    weight = Fraction(1, 2**n)
    for bits in itertools.product((1, -1), repeat=n):
        b_sum = sum(bits)
        bp_sum = b_sum if choice == "u" else -b_sum
        key = (Fraction(b_sum, n), Fraction(bp_sum, n))
        out[key] += weight
    return dict(out)


def binomial_collective_pmf(n: int) -> dict[Fraction, Fraction]:
    """pmf of the average of n fair +1/-1 coins."""
    return {
        Fraction(n - 2 * k, n): Fraction(math.comb(n, k), 2**n) for k in range(n + 1)
    }


def _kron(*mats: sp.Matrix) -> sp.Matrix:
    out = mats[0]
    for m in mats[1:]:
        rows = out.rows * m.rows
        cols = out.cols * m.cols
        new = sp.zeros(rows, cols)
        for i in range(out.rows):
            for j in range(out.cols):
                new[i * m.rows : (i + 1) * m.rows, j * m.cols : (j + 1) * m.cols] = out[i, j] * m
        out = new
    return out


_SX = sp.Matrix([[0, 1], [1, 0]])
_SY = sp.Matrix([[0, -sp.I], [sp.I, 0]])
_SZ = sp.Matrix([[1, 0], [0, -1]])
_ID = sp.eye(2)

_SYMBOLIC = {"X": _SX, "Y": _SY, "Z": _SZ, "I": _ID}


def _symbolic_factor(factor) -> sp.Matrix:
    if isinstance(factor, str):
        return _SYMBOLIC[factor]
    # xz-plane angle; only multiples of pi/4 appear in these tests
    theta = sp.nsimplify(factor, [sp.pi])
    return sp.cos(theta) * _SZ + sp.sin(theta) * _SX


def ghz_vector() -> sp.Matrix:
    v = sp.zeros(8, 1)
    v[0] = 1 / sp.sqrt(2)
    v[7] = -1 / sp.sqrt(2)
    return v


def bell_vector() -> sp.Matrix:
    v = sp.zeros(4, 1)
    v[0] = 1 / sp.sqrt(2)
    v[3] = 1 / sp.sqrt(2)
    return v


def symbolic_expectation(state: sp.Matrix, factors, sign: int = 1) -> sp.Expr:
    op = sign * _kron(*[_symbolic_factor(f) for f in factors])
    return sp.simplify((state.H * op * state)[0, 0])


def symbolic_joint_pmf(state: sp.Matrix, factors) -> dict[tuple[int, ...], Fraction]:
    """Exact Born probabilities for joint single-site measurements."""
    n = len(factors)
    mats = [_symbolic_factor(f) for f in factors]
    pmf = {}
    for outcome in itertools.product((1, -1), repeat=n):
        projs = [(_ID + o * m) / 2 for o, m in zip(outcome, mats)]
        op = _kron(*projs)
        p = sp.simplify((state.H * op * state)[0, 0])
        p = sp.nsimplify(p, rational=True)
        pmf[outcome] = Fraction(int(sp.numer(p)), int(sp.denom(p)))
    total = sum(pmf.values())
    assert total == 1, f"oracle pmf sums to {total}"
    return pmf


def iid_sum_bruteforce(
    round_pmf: dict[tuple[int, ...], Fraction], n: int
) -> dict[tuple[int, ...], Fraction]:
    """N-round sum pmf by enumerating every round-outcome sequence."""
    k = len(next(iter(round_pmf)))
    out: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)
    for seq in itertools.product(round_pmf.items(), repeat=n):
        sums = [0] * k
        prob = Fraction(1)
        for outcome, p in seq:
            prob *= p
            for i, o in enumerate(outcome):
                sums[i] += o
        out[tuple(sums)] += prob
    return dict(out)


def parity_solution_count(constraints) -> int:
    """Number of +1/-1 assignments satisfying parity constraints, via GF(2).

    Maps each value v to a bit x with v = (-1)^x; a constraint
    (variables, required) becomes sum of bits = (0 if required == +1 else
    1) mod 2.  Solutions number 2^(n - rank) or zero if inconsistent.
    """
    names = ("a_x", "a_y", "b_x", "b_y", "j_x", "j_y")
    rows = []
    for variables, required in constraints:
        row = [0] * len(names)
        for v in variables:
            row[names.index(v)] ^= 1
        rhs = 0 if required == 1 else 1
        rows.append((row, rhs))
    # Gaussian elimination over GF(2)
    rank = 0
    n_vars = len(names)
    pivot_col = 0
    rows = [list(r[0]) + [r[1]] for r in rows]
    for col in range(n_vars):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                rows[r] = [a ^ b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    for r in range(rank, len(rows)):
        if rows[r][-1] and not any(rows[r][:-1]):
            return 0
    # consistency among pivot rows is automatic after elimination
    for row in rows[:rank]:
        if row[-1] and not any(row[:-1]):
            return 0
    return 2 ** (n_vars - rank)


def truth_table_loop_scan() -> dict[tuple[str, str], int]:
    """Fixed-point counts for every device-policy pair, via truth tables."""
    tables = {
        "echo": {0: 0, 1: 1},
        "invert": {0: 1, 1: 0},
        "const0": {0: 0, 1: 0},
        "const1": {0: 1, 1: 1},
    }
    out = {}
    for a_name, a_map in tables.items():
        for b_name, b_map in tables.items():
            count = 0
            for i_a in (0, 1):
                for i_b in (0, 1):
                    if a_map[i_b] == i_a and b_map[i_a] == i_b:
                        count += 1
            out[(a_name, b_name)] = count
    return out


def grid_cone_check(a, b, j, radius: float = 6.0, step: float = 0.5) -> bool:
    """Sampled version of the overlap-containment question.

    True iff every grid event inside both future cones of a and b is also
    inside the future cone of j.  A False from the analytic routine must
    be witnessed by the overlap apex, which is checked by the caller.
    """

    def inside(apex_t, apex_x, t, x):
        return (t - apex_t) >= abs(x - apex_x)

    steps = int(2 * radius / step) + 1
    for i in range(steps):
        for k in range(steps):
            t = -radius + i * step
            x = -radius + k * step
            if inside(a[0], a[1], t, x) and inside(b[0], b[1], t, x):
                if not inside(j[0], j[1], t, x):
                    return False
    return True
