from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from corrlab.errors import NonCommutingError
from corrlab.quantum import (
    GHZ_PRODUCT_CONSTRAINTS,
    GHZ_STABILIZERS,
    MAX_QUBITS,
    PauliObservable,
    PureState,
    apply_observable,
    bell_state,
    commutator_norm,
    commutes,
    expectation,
    ghz_assignment_search,
    ghz_state,
    joint_probabilities,
    measure,
    outcome_tuples,
    product_expectation,
    sequential_measure,
)

RT2 = math.sqrt(2.0)


def obs(*factors, sign=1):
    return PauliObservable(tuple(factors), sign=sign)


class TestStates:
    def test_bell_amplitudes(self):
        amps = bell_state().amplitudes
        np.testing.assert_allclose(amps, [1 / RT2, 0, 0, 1 / RT2], atol=1e-15)

    def test_ghz_amplitudes(self):
        amps = ghz_state().amplitudes
        assert amps[0] == pytest.approx(1 / RT2)
        assert amps[7] == pytest.approx(-1 / RT2)
        assert np.all(amps[1:7] == 0)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="normalized"):
            PureState(np.array([1.0, 1.0]))

    def test_rejects_bad_length(self):
        with pytest.raises(ValueError, match="qubit count"):
            PureState(np.array([1.0, 0.0, 0.0]))

    def test_rejects_too_many_qubits(self):
        amps = np.zeros(2 ** (MAX_QUBITS + 1))
        amps[0] = 1.0
        with pytest.raises(ValueError, match="qubit count"):
            PureState(amps)

    def test_amplitudes_are_read_only(self):
        state = bell_state()
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0.0


class TestObservables:
    def test_rejects_unknown_letter(self):
        with pytest.raises(ValueError, match="unknown spin factor"):
            obs("X", "Q")

    def test_rejects_bad_sign(self):
        with pytest.raises(ValueError, match="sign"):
            obs("X", sign=2)

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="at least one factor"):
            PauliObservable(())

    def test_label(self):
        assert obs("X", "I", "Z").label() == "X*I*Z"
        assert obs("X", sign=-1).label() == "-X"
        assert "theta" in obs(math.pi / 4).label()

    def test_angle_matches_pauli_combination(self):
        # cos(t)*Z + sin(t)*X at t = 0 and t = pi/2 are Z and X themselves
        state = bell_state()
        assert expectation(state, obs(0.0, "Z")) == pytest.approx(
            expectation(state, obs("Z", "Z"))
        )
        assert expectation(state, obs(math.pi / 2, "X")) == pytest.approx(
            expectation(state, obs("X", "X"))
        )

    def test_mismatched_qubit_count(self):
        with pytest.raises(ValueError, match="qubit counts"):
            apply_observable(obs("X"), bell_state())


class TestExpectations:
    def test_ghz_stabilizers(self):
        state = ghz_state()
        seen = [expectation(state, o) for o, _ in GHZ_STABILIZERS]
        expected = [e for _, e in GHZ_STABILIZERS]
        np.testing.assert_allclose(seen, expected, atol=1e-12)
        assert expected == [1, 1, 1, -1]

    def test_ghz_stabilizers_match_symbolic_born_rule(self):
        state = ghz_state()
        vec = oracles.ghz_vector()
        for o, _ in GHZ_STABILIZERS:
            exact = oracles.symbolic_expectation(vec, o.factors, o.sign)
            assert expectation(state, o) == pytest.approx(float(exact), abs=1e-12)

    def test_ghz_pairwise_z_agreement(self):
        state = ghz_state()
        for factors in (("Z", "Z", "I"), ("Z", "I", "Z"), ("I", "Z", "Z")):
            assert expectation(state, obs(*factors)) == pytest.approx(1.0, abs=1e-12)

    def test_ghz_local_spins_are_unbiased(self):
        state = ghz_state()
        for letter in ("X", "Y", "Z"):
            for site in range(3):
                factors = ["I"] * 3
                factors[site] = letter
                assert expectation(state, obs(*factors)) == pytest.approx(0.0, abs=1e-12)

    def test_bell_correlations(self):
        state = bell_state()
        assert expectation(state, obs("Z", "Z")) == pytest.approx(1.0)
        assert expectation(state, obs("X", "X")) == pytest.approx(1.0)
        assert expectation(state, obs("Y", "Y")) == pytest.approx(-1.0)

    def test_bell_tilted_correlations(self):
        # Alice Z or X against Bob's xz-plane observables at +-45 degrees
        state = bell_state()
        plus, minus = math.pi / 4, -math.pi / 4
        for a, b, want in (
            ("Z", plus, RT2 / 2),
            ("Z", minus, RT2 / 2),
            ("X", plus, RT2 / 2),
            ("X", minus, -RT2 / 2),
        ):
            assert expectation(state, obs(a, b)) == pytest.approx(want, abs=1e-12)
            exact = oracles.symbolic_expectation(oracles.bell_vector(), (a, b))
            assert float(exact) == pytest.approx(want, abs=1e-12)

    def test_sign_flips_expectation(self):
        state = ghz_state()
        assert expectation(state, obs("X", "X", "X", sign=-1)) == pytest.approx(1.0)


class TestCommutation:
    def test_pair_products_on_ghz(self):
        state = ghz_state()
        xx, yy = obs("X", "X", "I"), obs("Y", "Y", "I")
        xy, yx = obs("X", "Y", "I"), obs("Y", "X", "I")
        assert product_expectation(state, xx, yy) == pytest.approx(-1.0, abs=1e-12)
        assert product_expectation(state, xy, yx) == pytest.approx(1.0, abs=1e-12)
        # consistent with (XX)(YY) = -ZZ and (XY)(YX) = +ZZ
        assert expectation(state, obs("Z", "Z", "I")) == pytest.approx(1.0, abs=1e-12)

    def test_pair_products_on_bell(self):
        state = bell_state()
        assert product_expectation(state, obs("X", "X"), obs("Y", "Y")) == pytest.approx(-1.0)
        assert product_expectation(state, obs("X", "Y"), obs("Y", "X")) == pytest.approx(1.0)

    def test_commuting_pairs(self):
        assert commutes(obs("X", "X", "I"), obs("Y", "Y", "I"))
        assert commutes(obs("X", "Y", "I"), obs("Y", "X", "I"))
        assert commutator_norm(obs("X", "X", "I"), obs("Y", "Y", "I")) < 1e-12

    def test_non_commuting_pair(self):
        assert not commutes(obs("X", "I"), obs("Y", "I"))
        assert commutator_norm(obs("X", "I"), obs("Y", "I")) > 1.0

    def test_qubit_count_mismatch(self):
        with pytest.raises(ValueError, match="qubit counts"):
            commutes(obs("X"), obs("X", "X"))


class TestMeasurement:
    def test_collapse_to_branch(self):
        # measuring Z on Alice's qubit of the GHZ state collapses all three
        rng = np.random.default_rng(5)
        state = ghz_state()
        for _ in range(20):
            rec = measure(state, obs("Z", "I", "I"), rng)
            tail = sequential_measure(
                rec.post_state, (obs("I", "Z", "I"), obs("I", "I", "Z")), rng
            )
            assert tail[0].outcome == rec.outcome
            assert tail[1].outcome == rec.outcome

    def test_eigenstate_measures_deterministically(self):
        rng = np.random.default_rng(1)
        state = ghz_state()
        for o, want in GHZ_STABILIZERS:
            for _ in range(5):
                rec = measure(state, o, rng)
                assert rec.outcome == want
                # projecting an eigenstate changes nothing
                overlap = abs(np.vdot(rec.post_state.amplitudes, state.amplitudes))
                assert overlap == pytest.approx(1.0, abs=1e-12)

    def test_repeated_measurement_is_stable(self):
        rng = np.random.default_rng(7)
        state = bell_state()
        o = obs("Z", "I")
        for _ in range(20):
            first = measure(state, o, rng)
            second = measure(first.post_state, o, rng)
            assert second.outcome == first.outcome

    def test_outcome_frequencies(self):
        rng = np.random.default_rng(11)
        state = bell_state()
        trials = 20_000
        total = sum(measure(state, obs("Z", "I"), rng).outcome for _ in range(trials))
        assert abs(total / trials) < 4.0 / math.sqrt(trials)

    def test_sequential_requires_commuting(self):
        rng = np.random.default_rng(0)
        with pytest.raises(NonCommutingError) as err:
            sequential_measure(ghz_state(), (obs("X", "I", "I"), obs("Y", "I", "I")), rng)
        assert err.value.pair == (0, 1)

    def test_sequential_product_identity(self):
        # per-trial identity o1*o2 = -o3 from (XX)(YY) = -ZZ on the GHZ state
        rng = np.random.default_rng(3)
        trio = (obs("X", "X", "I"), obs("Y", "Y", "I"), obs("Z", "Z", "I"))
        for _ in range(200):
            recs = sequential_measure(ghz_state(), trio, rng)
            assert recs[0].outcome * recs[1].outcome == -recs[2].outcome

    def test_order_independence_of_joint_statistics(self):
        trials = 20_000
        pair = (obs("X", "X", "I"), obs("Y", "Y", "I"))
        counts = {}
        for tag, order in (("ab", pair), ("ba", pair[::-1])):
            rng = np.random.default_rng(17)
            c = {}
            for _ in range(trials):
                recs = sequential_measure(ghz_state(), order, rng)
                by_obs = {r.observable: r.outcome for r in recs}
                key = (by_obs[pair[0]], by_obs[pair[1]])
                c[key] = c.get(key, 0) + 1
            counts[tag] = c
        keys = set(counts["ab"]) | set(counts["ba"])
        tv = sum(abs(counts["ab"].get(k, 0) - counts["ba"].get(k, 0)) for k in keys) / (
            2 * trials
        )
        assert tv < 4.0 / math.sqrt(trials)


class TestJointProbabilities:
    def test_outcome_tuple_order(self):
        assert outcome_tuples(2) == ((1, 1), (1, -1), (-1, 1), (-1, -1))

    def test_ghz_zzz(self):
        probs = joint_probabilities(ghz_state(), ("Z", "Z", "Z"))
        assert probs[(1, 1, 1)] == pytest.approx(0.5)
        assert probs[(-1, -1, -1)] == pytest.approx(0.5)
        assert sum(probs.values()) == pytest.approx(1.0)

    def test_ghz_xxx_support(self):
        # every outcome with nonzero weight has product -1
        probs = joint_probabilities(ghz_state(), ("X", "X", "X"))
        for outcome, p in probs.items():
            prod = outcome[0] * outcome[1] * outcome[2]
            if prod == 1:
                assert p == pytest.approx(0.0, abs=1e-12)
            else:
                assert p == pytest.approx(0.25, abs=1e-12)

    def test_matches_symbolic_born_rule(self):
        for factors in (("X", "X", "X"), ("X", "X", "Y"), ("X", "X", "Z"), ("Y", "Y", "X")):
            numeric = joint_probabilities(ghz_state(), factors)
            exact = oracles.symbolic_joint_pmf(oracles.ghz_vector(), factors)
            for outcome, p in numeric.items():
                assert p == pytest.approx(float(exact[outcome]), abs=1e-12)

    def test_needs_factor_per_qubit(self):
        with pytest.raises(ValueError, match="one factor per qubit"):
            joint_probabilities(ghz_state(), ("X", "X"))


class TestAssignmentSearch:
    def test_full_constraints_have_no_solution(self):
        assert ghz_assignment_search() == []
        assert oracles.parity_solution_count(GHZ_PRODUCT_CONSTRAINTS) == 0

    def test_positive_constraints_admit_solutions(self):
        positive = tuple(c for c in GHZ_PRODUCT_CONSTRAINTS if c[1] == 1)
        found = ghz_assignment_search(positive)
        assert len(found) == oracles.parity_solution_count(positive) == 8
        for assignment in found:
            for variables, required in positive:
                prod = 1
                for v in variables:
                    prod *= assignment[v]
                assert prod == required

    def test_any_three_constraints_admit_solutions(self):
        for drop in range(4):
            kept = tuple(c for i, c in enumerate(GHZ_PRODUCT_CONSTRAINTS) if i != drop)
            found = ghz_assignment_search(kept)
            assert len(found) == oracles.parity_solution_count(kept) == 8


@st.composite
def random_states(draw):
    n = draw(st.integers(min_value=1, max_value=3))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    rng = np.random.default_rng(seed)
    vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return PureState(vec / np.linalg.norm(vec))


@st.composite
def observables_for(draw, n):
    letters = st.sampled_from(["I", "X", "Y", "Z"])
    return PauliObservable(tuple(draw(letters) for _ in range(n)))


@given(random_states(), st.integers(min_value=0, max_value=2**32 - 1), st.data())
@settings(max_examples=60)
def test_measurement_invariants(state, seed, data):
    o = data.draw(observables_for(state.n_qubits))
    rng = np.random.default_rng(seed)
    exp = expectation(state, o)
    assert -1.0 - 1e-9 <= exp <= 1.0 + 1e-9
    rec = measure(state, o, rng)
    assert rec.outcome in (1, -1)
    assert np.linalg.norm(rec.post_state.amplitudes) == pytest.approx(1.0, abs=1e-9)
    # projective repeatability
    again = measure(rec.post_state, o, rng)
    assert again.outcome == rec.outcome


def test_measure_zero_probability_branch_is_never_sampled():
    rng = np.random.default_rng(2)
    state = PureState(np.array([1.0, 0.0]))
    for _ in range(50):
        assert measure(state, obs("Z"), rng).outcome == 1
