"""Cutting-plane optimizer for the separable-pair discrimination bound."""

import itertools
import math

import numpy as np
import pytest

from qhide.states import is_ppt, partial_transpose, HermitianOperator, tau_parity_state
from qhide.tauopt import (
    TAU_MAX_PAIRS,
    SolverNonConvergence,
    maximize_tau_bias,
    pair_povm_eigenvalues,
    symmetric_basis,
    tau_ppt_region,
)


@pytest.mark.parametrize("n,count", [(1, 4), (2, 10), (3, 20)])
def test_symmetric_basis_is_multiset_indexed(n, count):
    keys, mats = symmetric_basis(n)
    assert len(keys) == count
    assert mats.shape[0] == count
    # the basis elements are orthogonal and span all symmetrized products
    flat = mats.reshape(count, -1)
    gram = flat @ flat.T.conj()
    off = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off)) < 1e-12


def dense_from_coeffs(n, coeffs):
    keys, mats = symmetric_basis(n)
    return np.tensordot(np.asarray(coeffs), mats, axes=1)


def test_pair_povm_eigenvalues_match_dense():
    rng = np.random.default_rng(2)
    for _ in range(40):
        a, c, d, e = rng.normal(size=4)
        m = dense_from_coeffs(1, [a, c, d, e])
        got = np.sort(pair_povm_eigenvalues(a, c, d, e))
        want = np.sort(np.linalg.eigvalsh(m))
        assert np.allclose(got, want, atol=1e-10)


def test_pair_optimum_closed_form():
    opt = maximize_tau_bias(1)
    assert abs(opt.p00_plus_p11 - (1 + math.sqrt(3) / 2)) < 1e-6
    # the maximal-sum face is flat, so only the sum is pinned down
    assert opt.p00_plus_p11 == pytest.approx(opt.p00 + opt.p11, abs=1e-12)
    assert opt.cut_rounds >= 1


def test_two_pair_optimum():
    opt = maximize_tau_bias(2)
    assert abs(opt.p00_plus_p11 - 1.75) < 1e-3


@pytest.mark.parametrize("n", [1, 2])
def test_optimum_certificate_is_feasible_povm(n):
    opt = maximize_tau_bias(n)
    m0 = opt.povm_zero  # already dense; coeffs dict carries the basis weights
    m1 = np.eye(4**n) - m0
    split = (2**n, 2**n)
    for m in (m0, m1):
        assert np.linalg.eigvalsh(m).min() > -1e-6
        assert is_ppt(HermitianOperator(m, split), tol=1e-6)
    t0 = tau_parity_state(0, n).mat
    t1 = tau_parity_state(1, n).mat
    assert np.trace(m0 @ t0).real == pytest.approx(opt.p00, abs=1e-8)
    assert np.trace(m1 @ t1).real == pytest.approx(opt.p11, abs=1e-8)


def test_fixed_p00_slice():
    # on the diagonal the flat face is reachable, so p11 matches the target
    sym = (2 + math.sqrt(3)) / 4
    opt = maximize_tau_bias(1, p00_target=sym)
    assert opt.p00 == pytest.approx(sym, abs=1e-8)
    assert opt.p11 == pytest.approx(sym, abs=1e-6)

    # perfect p00 forces a projector onto the even support, which fails the
    # transpose test, so the boundary dips strictly below the flat face there
    edge = maximize_tau_bias(1, p00_target=1.0)
    assert edge.p00 == pytest.approx(1.0, abs=1e-8)
    assert edge.p11 < math.sqrt(3) / 2 - 0.03
    assert edge.p11 > 0.75

    # far from the peak the other error can vanish entirely
    loose = maximize_tau_bias(1, p00_target=0.5)
    assert loose.p11 == pytest.approx(1.0, abs=1e-8)


def test_region_contains_peak_and_is_concave():
    reg = tau_ppt_region(1, grid=21)
    sums = reg[:, 0] + reg[:, 1]
    assert sums.max() == pytest.approx(1 + math.sqrt(3) / 2, abs=1e-6)
    # upper boundary of a convex body: p11(p00) is concave
    p00, p11 = reg[:, 0], reg[:, 1]
    for i in range(1, len(p00) - 1):
        lam = (p00[i] - p00[i - 1]) / (p00[i + 1] - p00[i - 1])
        chord = (1 - lam) * p11[i - 1] + lam * p11[i + 1]
        assert p11[i] >= chord - 1e-6


def test_region_accepts_explicit_grid():
    reg = tau_ppt_region(1, grid=[0.0, 0.5, 1.0])
    assert reg.shape[1] == 2
    assert len(reg) == 4  # the peak p00 is spliced in
    assert reg[0, 1] == pytest.approx(1.0, abs=1e-8)


def test_pair_cap():
    with pytest.raises(ValueError):
        maximize_tau_bias(TAU_MAX_PAIRS + 1)


def test_nonconvergence_is_exported():
    assert issubclass(SolverNonConvergence, Exception)
