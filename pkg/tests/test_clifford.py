"""Clifford group enumeration, conjugation, synthesis, twirl, walks."""

import numpy as np
import pytest

from qhide.clifford import (
    CliffordElement,
    apply_circuit,
    circuit_unitary,
    clifford_twirl_dense,
    compose,
    conjugate,
    element_unitary,
    enumerate_group,
    gate_element,
    generator_elements,
    generator_gates,
    group_order,
    identity_element,
    image_walk_distribution,
    inverse,
    random_walk_sample,
    synthesize_circuit,
    walk_distribution,
    walk_ensemble_indices,
    walk_length_policy,
)
from qhide.pauli import PauliString
from qhide.states import h_operator, hiding_state

GATE_BUDGET_CONST = 6


def test_group_order_formula():
    # 2^(n^2+2n) * prod (4^j - 1), times 8 phase choices
    assert group_order(1) == 192
    assert group_order(2) == 92160
    assert group_order(1) // 8 == 24
    assert group_order(2) // 8 == 11520


@pytest.mark.parametrize("n", [1, 2])
def test_enumeration_count(n):
    elems = enumerate_group(n)
    assert len(elems) == group_order(n) // 8
    assert len(set(elems)) == len(elems)


def test_enumeration_cap():
    with pytest.raises(ValueError):
        enumerate_group(3)


def test_unitaries_realize_images():
    for elem, u in zip(*enumerate_group(1, with_unitaries=True)):
        for j, letter in enumerate("XZ"):
            src = PauliString.from_text(letter)
            img = conjugate(elem, src)
            assert np.allclose(u @ src.dense() @ u.conj().T, img.dense())


def test_group_laws_on_samples():
    elems = enumerate_group(2)
    rng = np.random.default_rng(17)
    ident = identity_element(2)
    for idx in rng.integers(0, len(elems), size=12):
        c = elems[idx]
        assert compose(c, inverse(c)) == ident
        assert compose(ident, c) == c
    a, b = elems[rng.integers(len(elems))], elems[rng.integers(len(elems))]
    d = rng.choice(len(elems))
    assert compose(compose(a, b), elems[d]) == compose(a, compose(b, elems[d]))


def test_conjugation_is_homomorphism():
    elems = enumerate_group(1)
    x = PauliString.from_text("X")
    for c in elems[:8]:
        for g in generator_elements(1):
            lhs = conjugate(compose(g, c), x)
            rhs = conjugate(g, conjugate(c, x))
            assert lhs == rhs


@pytest.mark.parametrize("n", [1, 2, 3])
def test_synthesis_round_trip(n):
    rng = np.random.default_rng(23 + n)
    budget = 3 * n * n + 7 * n + GATE_BUDGET_CONST
    for _ in range(30):
        c = random_walk_sample(n, 60, rng)
        circ = synthesize_circuit(c)
        assert len(circ.gates) <= budget
        assert apply_circuit(circ) == c


def test_synthesized_unitary_matches_element():
    rng = np.random.default_rng(4)
    c = random_walk_sample(1, 80, rng)
    circ = synthesize_circuit(c)
    u = circuit_unitary(circ)
    v = element_unitary(c)
    # equal up to global phase
    k = np.argmax(np.abs(v))
    ratio = u.flat[k] / v.flat[k]
    assert np.allclose(u, ratio * v)


def test_gate_elements_known_actions():
    h = gate_element(1, generator_gates(1)[0])
    # the Hadamard-like generator must exchange X and Z up to sign
    img_x = conjugate(h, PauliString.from_text("X"))
    assert img_x.to_text().lstrip("+-") in ("Z", "X")


def test_twirl_projects_to_commutant():
    rng = np.random.default_rng(9)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    out = clifford_twirl_dense(rho, 1)
    # commutant of the bilateral action is span{I, H}; the two are not
    # trace-orthogonal, so project with a Gram solve
    h = h_operator(1).mat
    basis = [np.eye(4), h]
    gram = np.array([[np.trace(a @ b).real for b in basis] for a in basis])
    rhs = np.array([np.trace(a @ out).real for a in basis])
    ci, ch = np.linalg.solve(gram, rhs)
    assert np.max(np.abs(out - ci * np.eye(4) - ch * h)) < 1e-10


@pytest.mark.parametrize("bit", [0, 1])
def test_twirl_fixes_hiding_states(bit):
    rho = hiding_state(bit, 1).mat
    assert np.max(np.abs(clifford_twirl_dense(rho, 1) - rho)) < 1e-10


def test_walk_distribution_converges_to_uniform():
    steps = walk_length_policy(1, 0.01)
    dist = walk_distribution(1, steps)
    assert np.abs(dist - 1 / 24).sum() <= 0.01
    # and the policy is not wildly conservative: a tenth of the steps is not enough
    short = walk_distribution(1, 10)
    assert np.abs(short - 1 / 24).sum() > 0.01


def test_walk_policy_monotone():
    assert walk_length_policy(1, 0.001) > walk_length_policy(1, 0.01)
    assert walk_length_policy(2, 0.01) > walk_length_policy(1, 0.01)


def test_image_distribution_marginalizes_walk():
    steps = 40
    dist = walk_distribution(1, steps)
    elems = enumerate_group(1)
    start = PauliString.from_text("X")
    images, weights = image_walk_distribution(1, steps, start)
    oracle = {}
    for w, c in zip(dist, elems):
        oracle[conjugate(c, start)] = oracle.get(conjugate(c, start), 0.0) + w
    assert abs(sum(weights) - 1) < 1e-12
    for img, w in zip(images, weights):
        assert abs(w - oracle[img]) < 1e-12


def test_walk_ensemble_seed_determinism():
    a = walk_ensemble_indices(1, 50, 200, seed=42)
    b = walk_ensemble_indices(1, 50, 200, seed=42)
    assert np.array_equal(a, b)
    c = walk_ensemble_indices(1, 50, 200, seed=43)
    assert not np.array_equal(a, c)


def test_walk_ensemble_matches_exact_distribution():
    steps, samples = 30, 20000
    idx = walk_ensemble_indices(1, steps, samples, seed=7)
    emp = np.bincount(idx, minlength=24) / samples
    exact = walk_distribution(1, steps)
    assert np.abs(emp - exact).max() < 0.02


def test_random_walk_sample_matches_indices():
    # the scalar sampler and the vectorized one share the index semantics
    elems = enumerate_group(1)
    c = random_walk_sample(1, 25, seed=123)
    assert c in elems
