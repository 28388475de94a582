"""Optimal two-outcome measurements against the separable tau pair.

The tau states are invariant under a per-pair symmetry group and under pair
permutations, so an optimal POVM element can be taken from the span of
symmetrized products of four single-pair basis operators.  Both states and the
basis are free of the imaginary Pauli, making every candidate POVM element
exactly invariant under partial transposition; the only nontrivial constraint
is 0 <= M <= I, enforced by eigenvector cutting planes over a dense LP.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .simplex import solve_lp
from .states import tau_parity_state, tensor_bipartite

EIG_FEASIBILITY_TOL = -1e-8
MAX_CUT_ROUNDS = 500
TAU_MAX_PAIRS = 3


class SolverNonConvergence(RuntimeError):
    pass


_I2 = np.eye(2)
_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def _two(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.kron(p, q)


_PAIR_BASIS = {
    "a": np.eye(4),
    "c": _two(_Z, _I2) + _two(_I2, _Z) + _two(_X, _I2) + _two(_I2, _X),
    "d": _two(_Z, _Z) + _two(_X, _X),
    "e": _two(_Z, _X) + _two(_X, _Z),
}


@lru_cache(maxsize=None)
def symmetric_basis(n: int) -> tuple[tuple[tuple[str, ...], ...], np.ndarray]:
    """Multiset labels and dense matrices of the symmetrized operator basis."""
    labels = tuple(itertools.combinations_with_replacement("acde", n))
    mats = []
    for multiset in labels:
        total = np.zeros((4**n, 4**n))
        for perm in set(itertools.permutations(multiset)):
            term = _PAIR_BASIS[perm[0]]
            for done, pair in enumerate(perm[1:], start=1):
                term = tensor_bipartite(term, done, _PAIR_BASIS[pair], 1)
            total += term
        mats.append(total)
    return labels, np.stack(mats)


def pair_povm_eigenvalues(a: float, c: float, d: float, e: float) -> tuple[float, ...]:
    """Closed-form spectrum of a*Pa + c*Pc + d*Pd + e*Pe on one pair."""
    alpha = a + d + e
    beta = math.sqrt(8 * c * c + (d - e) ** 2)
    return (a - 2 * d, a - 2 * e, alpha + beta, alpha - beta)


def pair_probabilities(a: float, c: float, d: float, e: float) -> tuple[float, float]:
    """(p00, p11) of the single-pair POVM element against the tau pair."""
    return a + 2 * c + e, (1 - a) + 2 * c - d


@dataclass(frozen=True)
class TauOptimum:
    p00_plus_p11: float
    p00: float
    p11: float
    coeffs: dict[tuple[str, ...], float]
    povm_zero: np.ndarray
    cut_rounds: int


def _tau_pair(n: int) -> tuple[np.ndarray, np.ndarray]:
    return tau_parity_state(0, n).mat.real, tau_parity_state(1, n).mat.real


def maximize_tau_bias(n: int, p00_target: float | None = None) -> TauOptimum:
    """Maximize p00 + p11 (optionally at fixed p00) over symmetric POVMs.

    Alternates a dense LP over the basis coefficients with eigenvector cuts
    enforcing 0 <= M <= I, until the candidate is feasible to within the
    eigenvalue tolerance.
    """
    if not 1 <= n <= TAU_MAX_PAIRS:
        raise ValueError(f"tau optimizer capped at n = {TAU_MAX_PAIRS}")
    labels, mats = symmetric_basis(n)
    k = len(labels)
    t0, t1 = _tau_pair(n)
    obj_vec = np.array([np.trace(m @ (t0 - t1)) for m in mats])
    p00_vec = np.array([np.trace(m @ t0) for m in mats])
    p11_vec = -np.array([np.trace(m @ t1) for m in mats])
    dim = mats.shape[1]

    # coefficients are free: columns are u then v with x = u - v
    def widen(row: np.ndarray) -> np.ndarray:
        return np.concatenate([row, -row])

    cuts_a: list[np.ndarray] = []
    cuts_b: list[float] = []
    diag_rows = mats.diagonal(axis1=1, axis2=2).T  # (dim, k), row j = diag entries
    for j in range(dim):
        cuts_a.append(-diag_rows[j])
        cuts_b.append(0.0)
        cuts_a.append(diag_rows[j])
        cuts_b.append(1.0)

    a_eq = b_eq = None
    if p00_target is not None:
        a_eq = widen(p00_vec)[None, :]
        b_eq = np.array([p00_target])

    objective = widen(obj_vec)
    for round_no in range(1, MAX_CUT_ROUNDS + 1):
        a_ub = np.stack([widen(r) for r in cuts_a])
        res = solve_lp(objective, a_ub=a_ub, b_ub=np.array(cuts_b), a_eq=a_eq, b_eq=b_eq)
        if res.status == "infeasible":
            raise SolverNonConvergence("cut LP infeasible")
        if res.status == "unbounded":
            direction = np.tensordot(res.ray[:k] - res.ray[k:], mats, axes=1)
            vals, vecs = np.linalg.eigh(direction)
            added = False
            if vals[0] < -1e-12:
                v = vecs[:, 0]
                cuts_a.append(-np.einsum("i,nij,j->n", v, mats, v))
                cuts_b.append(0.0)
                added = True
            if vals[-1] > 1e-12:
                v = vecs[:, -1]
                cuts_a.append(np.einsum("i,nij,j->n", v, mats, v))
                cuts_b.append(1.0)
                added = True
            if not added:
                raise SolverNonConvergence("unbounded ray with flat direction")
            continue
        x = res.x[:k] - res.x[k:]
        m0 = np.tensordot(x, mats, axes=1)
        lo_vals, lo_vecs = np.linalg.eigh(m0)
        hi_vals, hi_vecs = np.linalg.eigh(np.eye(dim) - m0)
        feasible = True
        if lo_vals[0] < EIG_FEASIBILITY_TOL:
            v = lo_vecs[:, 0]
            cuts_a.append(-np.einsum("i,nij,j->n", v, mats, v))
            cuts_b.append(0.0)
            feasible = False
        if hi_vals[0] < EIG_FEASIBILITY_TOL:
            v = hi_vecs[:, 0]
            cuts_a.append(np.einsum("i,nij,j->n", v, mats, v))
            cuts_b.append(1.0)
            feasible = False
        if feasible:
            p00 = float(p00_vec @ x)
            p11 = 1.0 + float(p11_vec @ x)
            return TauOptimum(
                1.0 + float(obj_vec @ x),
                p00,
                p11,
                dict(zip(labels, x)),
                m0,
                round_no,
            )
    raise SolverNonConvergence(f"no feasible optimum within {MAX_CUT_ROUNDS} rounds")


def tau_ppt_region(n: int, grid=101) -> np.ndarray:
    """Boundary of the reachable (p00, p11) region: max p11 at each fixed p00.

    The p00 value of the unconstrained optimum is spliced into the grid so the
    best row of the returned table attains the full optimum, not a grid
    neighbour of it.
    """
    if isinstance(grid, int):
        p00s = np.linspace(0.0, 1.0, grid)
    else:
        p00s = np.asarray(grid, dtype=float)
    peak = maximize_tau_bias(n)
    p00s = np.unique(np.append(p00s, peak.p00))
    out = np.empty((len(p00s), 2))
    for i, t in enumerate(p00s):
        opt = maximize_tau_bias(n, p00_target=float(t))
        out[i] = (t, opt.p11)
    return out
