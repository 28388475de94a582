"""LOCC attack protocols: exact conditionals, Monte Carlo, preparation."""

from fractions import Fraction

import numpy as np
import pytest

from qhide.pauli import BellLabel, cardinalities, odd_labels
from qhide.protocols import (
    pairwise_attack_closed_form,
    pairwise_attack_exact,
    pairwise_attack_exact_fractions,
    pairwise_attack_mc,
    pairwise_trial,
    prepare_rho0,
    prepare_rho1_sample,
    tau_protocol_exact,
    tau_protocol_mc,
    tau_unlock_povm,
)
from qhide.states import hiding_state, is_ppt, HermitianOperator, tau_state
from qhide.clifford import walk_length_policy


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_exact_attack_closed_form(n):
    p00, p11 = pairwise_attack_exact_fractions(n)
    assert p00 == Fraction(2**n + 2, 2 * (2**n + 1))
    assert p11 == Fraction(2**n, 2 * (2**n - 1))
    cf = pairwise_attack_closed_form(n)
    assert (p00, p11) == cf


def test_exact_attack_n2_values():
    p00, p11 = pairwise_attack_exact_fractions(2)
    assert p00 == Fraction(3, 5)
    assert p11 == Fraction(2, 3)


def test_exact_attack_floats():
    probs = pairwise_attack_exact(2)
    assert probs.p00 == pytest.approx(0.6, abs=1e-15)
    assert probs.p11 == pytest.approx(2 / 3, abs=1e-15)


def test_trial_record_structure():
    t = pairwise_trial(2, 1, seed=5)
    assert t.hidden_bit == 1
    assert t.label.parity() == 1
    assert len(t.alice_bits) == 2 and len(t.bob_bits) == 2
    assert t.decoded_bit in (0, 1)


def test_trial_measurement_correlations():
    # computational-basis outcomes: amplitude-flipped pairs (labels 2, 3)
    # anticorrelate, the others correlate exactly
    for seed in range(60):
        t = pairwise_trial(2, seed % 2, seed=seed)
        for a, b, pair in zip(t.alice_bits, t.bob_bits, t.label.pairs):
            if pair >= 2:
                assert a != b
            else:
                assert a == b


def test_trial_decode_rule_even_guess():
    # disagreement count parity cannot exceed the singlet count parity's
    # information; the decoder guesses from the disagreement pattern
    t = pairwise_trial(1, 0, seed=1)
    assert t.decoded_bit in (0, 1)


@pytest.mark.parametrize("n", [1, 2])
def test_mc_matches_exact_within_3_sigma(n):
    exact = pairwise_attack_exact(n)
    mc = pairwise_attack_mc(n, trials=20000, seed=11)
    assert abs(mc.p00 - exact.p00) <= 3 * mc.se00
    assert abs(mc.p11 - exact.p11) <= 3 * mc.se11
    assert mc.trials == 20000


def test_mc_seed_determinism_and_thread_invariance():
    a = pairwise_attack_mc(2, trials=8192, seed=3, threads=1)
    b = pairwise_attack_mc(2, trials=8192, seed=3, threads=4)
    assert a == b
    c = pairwise_attack_mc(2, trials=8192, seed=4)
    assert a != c


def test_prepare_rho0_default_steps_follow_policy():
    _, info = prepare_rho0(1, seed=2)
    assert info["steps"] == walk_length_policy(1, 0.01)
    assert info["gates"] >= 0


def test_prepare_rho0_ensemble_average():
    from qhide.clifford import circuit_unitary

    zero = np.zeros(4)
    zero[0] = 1.0  # |00> in block order, one qubit per side
    acc = np.zeros((4, 4), dtype=complex)
    samples = 400
    for seed in range(samples):
        circ, _ = prepare_rho0(1, seed=seed, steps=150)
        u = circuit_unitary(circ)
        vec = np.kron(u, u) @ zero
        acc += np.outer(vec, vec.conj())
    acc /= samples
    assert np.max(np.abs(acc - hiding_state(0, 1).mat)) < 0.08


def test_prepare_rho1_labels_always_odd():
    rng = np.random.default_rng(8)
    for _ in range(300):
        lab = prepare_rho1_sample(2, rng)
        assert lab.parity() == 1


def test_prepare_rho1_hits_every_odd_label():
    rng = np.random.default_rng(12)
    seen = {prepare_rho1_sample(2, rng).index() for _ in range(2000)}
    assert seen == {l.index() for l in odd_labels(2)}


def test_prepare_rho1_uniformity_chi2():
    from qhide.stats import category_counts, chi_square_uniform

    rng = np.random.default_rng(21)
    _, odd = cardinalities(2)
    samples = [prepare_rho1_sample(2, rng).index() for _ in range(6000)]
    counts = category_counts(samples, [l.index() for l in odd_labels(2)])
    stat, p = chi_square_uniform(counts)
    assert p > 1e-4


# tau-pair unlocking protocol


def test_tau_povm_is_separable_povm():
    m0, m1 = tau_unlock_povm()
    assert np.allclose(m0 + m1, np.eye(4))
    for m in (m0, m1):
        assert np.linalg.eigvalsh(m).min() > -1e-12
        assert is_ppt(HermitianOperator(m, (2, 2)))


def test_tau_protocol_achieves_conjectured_peak():
    probs = tau_protocol_exact()
    bias = probs.p00 + probs.p11 - 1
    assert abs(bias - np.sqrt(3) / 2) < 1e-12
    assert probs.p00 == pytest.approx(probs.p11, abs=1e-12)
    assert probs.p00 == pytest.approx((2 + np.sqrt(3)) / 4, abs=1e-12)


def test_tau_protocol_symmetrized_matches():
    plain = tau_protocol_exact()
    sym = tau_protocol_exact(symmetrized=True)
    assert plain.p00 == pytest.approx(sym.p00, abs=1e-12)
    assert plain.p11 == pytest.approx(sym.p11, abs=1e-12)


def test_tau_mc_within_3_sigma():
    exact = tau_protocol_exact()
    mc = tau_protocol_mc(trials=20000, seed=9)
    assert abs(mc.p00 - exact.p00) <= 3 * mc.se00
    assert abs(mc.p11 - exact.p11) <= 3 * mc.se11


def test_tau_mc_deterministic():
    a = tau_protocol_mc(trials=5000, seed=1)
    b = tau_protocol_mc(trials=5000, seed=1)
    assert a == b
