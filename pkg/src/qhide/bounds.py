"""Security bounds for the hiding states.

Covers the single-bit bias window (closed form, LP over Bell-diagonal POVMs,
and the two-parameter Werner family), the multi-bit deviation and mutual
information bounds with their integer coefficient recursions, the guaranteed
distinguisher for orthogonal state pairs, the information cap implied by a
bounded decoding bias, and the entanglement floor for perfect unlocking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache

import numpy as np

from .pauli import PauliString, all_unsigned, cardinalities
from .simplex import LpResult, solve_lp
from .states import hiding_state

LN2 = math.log(2.0)
BELL_LP_MAX_PAIRS = 3
PAULI_COEFF_MAX_PAIRS = 2


# ---------------------------------------------------------------------------
# Single-bit bias window


@dataclass(frozen=True)
class SingleBitBound:
    tight: Fraction  # 2/(2^n + 1)
    weak: Fraction  # 2^-(n-1), the looser power-of-two form


def single_bit_bound(n: int) -> SingleBitBound:
    """Largest achievable |p00 + p11 - 1| over LOCC attacks, both forms."""
    if n < 1:
        raise ValueError("need at least one pair")
    return SingleBitBound(Fraction(2, 2**n + 1), Fraction(1, 2 ** (n - 1)))


def _count_11_pairs(word: int, n: int) -> int:
    count = 0
    for _ in range(n):
        if word & 3 == 3:
            count += 1
        word >>= 2
    return count


def bell_sign_matrix(n: int) -> np.ndarray:
    """All partially transposed Bell projectors share one eigenbasis; entry
    (m, s) is the eigenvalue of transposed projector s on basis vector m."""
    size = 4**n
    mat = np.empty((size, size))
    for m in range(size):
        for s in range(size):
            mat[m, s] = -1.0 if _count_11_pairs(m ^ s, n) & 1 else 1.0
    return mat / float(2**n)


@dataclass(frozen=True)
class BellDiagPovm:
    n: int
    alpha: np.ndarray  # weight of each Bell projector in M0, all in [0,1]


@dataclass(frozen=True)
class BellDiagLp:
    optimum: float
    povm: BellDiagPovm
    result: LpResult


def p00_p11_objective(n: int) -> tuple[np.ndarray, float]:
    """Gradient and constant of p00 + p11 as an affine function of alpha."""
    size = 4**n
    n_even, n_odd = cardinalities(n)
    weights = np.empty(size)
    for s in range(size):
        odd = _count_11_pairs(s, n) & 1
        weights[s] = -1.0 / n_odd if odd else 1.0 / n_even
    return weights, 1.0


def p00_objective(n: int) -> tuple[np.ndarray, float]:
    size = 4**n
    n_even, _ = cardinalities(n)
    weights = np.zeros(size)
    for s in range(size):
        if not _count_11_pairs(s, n) & 1:
            weights[s] = 1.0 / n_even
    return weights, 0.0


def bell_diag_lp(n: int, objective=None) -> BellDiagLp:
    """Maximize an affine objective over Bell-diagonal POVMs whose partial
    transpose stays between 0 and I.

    With no explicit objective, maximizes p00 + p11; the reported optimum then
    includes the +1 constant so it reads directly as p00 + p11.
    """
    if n > BELL_LP_MAX_PAIRS:
        raise ValueError(f"bell_diag_lp capped at n = {BELL_LP_MAX_PAIRS}")
    if objective is None:
        weights, offset = p00_p11_objective(n)
    elif isinstance(objective, tuple) and len(objective) == 2:
        weights, offset = np.asarray(objective[0], dtype=float), float(objective[1])
    else:
        weights, offset = np.asarray(objective, dtype=float), 0.0
    size = 4**n
    signs = bell_sign_matrix(n)
    a_ub = np.vstack([signs, -signs, np.eye(size)])
    b_ub = np.concatenate([np.ones(size), np.zeros(size), np.ones(size)])
    res = solve_lp(weights, a_ub=a_ub, b_ub=b_ub, maximize=True)
    if res.status != "optimal":
        raise RuntimeError(f"bias LP ended {res.status}")
    return BellDiagLp(res.objective + offset, BellDiagPovm(n, res.x), res)


@dataclass(frozen=True)
class WernerPovm:
    """M0 = alpha*I + beta*(2^n H); valid iff beta sits in werner_window."""

    alpha: float
    beta: float


def werner_window(alpha: float, n: int) -> tuple[float, float]:
    """Range of beta keeping both POVM elements positive and PPT."""
    lo = max(alpha - 1.0, -alpha / 2**n)
    hi = min(alpha, (1.0 - alpha) / 2**n)
    return lo, hi


def _werner_max_p11(p00: float, n: int) -> float:
    # bias 2*beta at fixed p00 = alpha + beta maxes out at the window edge
    beta = min(p00 / 2.0, (1.0 - p00) / (2**n - 1))
    return 1.0 - p00 + 2.0 * beta


@dataclass(frozen=True)
class WernerRegion:
    n: int
    points: np.ndarray  # rows (p00, max p11), includes the exact peak p00
    best_p00: float
    best_sum: float  # max over the region of p00 + p11


def werner_feasible_region(n: int, grid=101) -> WernerRegion:
    """Closed-form upper boundary of the reachable (p00, p11) region."""
    if isinstance(grid, int):
        p00s = np.linspace(0.0, 1.0, grid)
    else:
        p00s = np.asarray(grid, dtype=float)
    best_p00 = 2.0 / (2**n + 1)
    p00s = np.unique(np.append(p00s, best_p00))
    points = np.array([(t, _werner_max_p11(float(t), n)) for t in p00s])
    return WernerRegion(n, points, best_p00, 1.0 + best_p00)


def region_boundary_gap(p00: Fraction, p11: Fraction, n: int) -> Fraction:
    """Residual of the upper boundary line of the feasible region; zero means
    the point sits exactly on the boundary."""
    half = Fraction(1, 2)
    up = half * (1 + Fraction(1, 2**n))
    lo = half * (1 - Fraction(1, 2**n))
    return up * p00 + lo * p11 - up


def fig2_points(n: int) -> dict[str, tuple[Fraction, Fraction]]:
    """Named corner points of the feasible-region figure."""
    return {
        "A": (Fraction(1), Fraction(0)),
        "B": (Fraction(2, 2**n + 1), Fraction(1)),
        "C": (Fraction(2**n - 1, 2**n + 1), Fraction(0)),
        "D": (
            Fraction(2**n + 2, 2 * (2**n + 1)),
            Fraction(2**n, 2 * (2**n - 1)),
        ),
    }


# ---------------------------------------------------------------------------
# Multi-bit correlation coefficients


@cache
def correlation_coefficients(k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Integer envelopes (L_p, U_p) for p = 0..k of the k-bit correlation
    functions; L_k = 0 and U_k = 1 seed the downward recursion."""
    low = [0] * (k + 1)
    up = [0] * (k + 1)
    low[k], up[k] = 0, 1
    for p in range(k - 1, -1, -1):
        low[p] = -sum(up[l] * math.comb(k - p, l - p) for l in range(p + 1, k + 1))
        up[p] = -(2**k - 1) * low[p]
    return tuple(low), tuple(up)


@cache
def _stirling2(m: int, l: int) -> int:
    if m == l:
        return 1
    if l == 0 or l > m:
        return 0
    return l * _stirling2(m - 1, l) + _stirling2(m - 1, l - 1)


def correlation_lower_stirling(k: int, p: int) -> int:
    """Closed form of L_p as a weighted sum of Stirling partition numbers."""
    if p == k:
        return 0
    return -sum(
        (2**k - 1) ** (l - 1) * math.factorial(l) * _stirling2(k - p, l)
        for l in range(1, k - p + 1)
    )


def correlation_defect(k: int, n: int) -> Fraction:
    """Exact total deviation of the k-bit hidden distribution from uniform."""
    low, _ = correlation_coefficients(k)
    total = Fraction(0)
    for p in range(k):
        total += math.comb(k, k - p) * abs(low[p]) * Fraction(1, 2 ** (n * (k - p)))
    return (2**k - 1) * total


@dataclass(frozen=True)
class MultiBitBound:
    n: int
    k: int
    low: tuple[int, ...]  # L_p, p = 0..k
    up: tuple[int, ...]  # U_p, p = 0..k
    delta: Fraction
    info_bound: float  # bits


def multi_bit_bound(n: int, k: int) -> MultiBitBound:
    """Exact deviation Delta and the information cap (2^k/ln 2)*Delta.

    The L_p envelope is computed both by the downward recursion and the
    Stirling closed form; any mismatch is a bug, not an input problem.
    """
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    low, up = correlation_coefficients(k)
    for p in range(k + 1):
        if low[p] != correlation_lower_stirling(k, p):
            raise AssertionError(f"recursion and closed form disagree at p={p}")
        if not low[p] <= 0 <= up[p]:
            raise AssertionError("envelope lost its sign pattern")
    delta = correlation_defect(k, n)
    return MultiBitBound(n, k, low, up, delta, float(delta) * 2**k / LN2)


def correlation_defect_leading(k: int, n: int) -> float:
    return k * 2.0 ** (k - n)


def multi_bit_contours(n_values, k_values) -> np.ndarray:
    """log2 of the information bound on a (k, n) grid, rows indexed by k."""
    out = np.empty((len(k_values), len(n_values)))
    for i, k in enumerate(k_values):
        for j, n in enumerate(n_values):
            out[i, j] = math.log2(float(multi_bit_bound(n, k).info_bound))
    return out


def shares_needed(k: int, epsilon: float) -> float:
    """Asymptotic share count for hiding k bits with information leak epsilon."""
    return 2 * k + math.log2(k) + math.log2(1.0 / LN2) + math.log2(1.0 / epsilon)


def min_shares(k: int, epsilon: float, n_max: int = 512) -> int:
    """Smallest n whose exact information bound drops below epsilon."""
    for n in range(1, n_max + 1):
        if multi_bit_bound(n, k).info_bound <= epsilon:
            return n
    raise ValueError("epsilon not reached within n_max shares")


# ---------------------------------------------------------------------------
# Pauli-basis distinguishers


@dataclass(frozen=True)
class PauliCoeffs:
    n: int  # pairs; the state lives on 2n qubits
    labels: tuple[PauliString, ...]
    a: np.ndarray  # Tr[rho P] in `labels` order; a[0] = 1 at the identity


def pauli_coefficients(rho: np.ndarray) -> PauliCoeffs:
    """Expansion coefficients of a 2n-qubit state over all Pauli strings."""
    dim = rho.shape[0]
    nq = dim.bit_length() - 1
    if 2**nq != dim or nq % 2:
        raise ValueError("expected a state on n qubit pairs")
    if nq // 2 > PAULI_COEFF_MAX_PAIRS:
        raise ValueError(f"pauli_coefficients capped at n = {PAULI_COEFF_MAX_PAIRS}")
    labels = tuple(all_unsigned(nq))
    coeffs = np.empty(len(labels))
    for i, p in enumerate(labels):
        coeffs[i] = np.trace(rho @ p.dense()).real
    return PauliCoeffs(nq // 2, labels, coeffs)


def pauli_reconstruction_gap(rho: np.ndarray) -> float:
    """Max-norm error of rebuilding rho from its Pauli coefficients."""
    co = pauli_coefficients(rho)
    dim = rho.shape[0]
    rebuilt = np.zeros((dim, dim), dtype=complex)
    for p, a in zip(co.labels, co.a):
        rebuilt += a * p.dense()
    return float(np.max(np.abs(rebuilt / dim - rho)))


ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class PauliDistinguisher:
    pauli: PauliString  # signed; the POVM is {(I + P)/2, (I - P)/2}
    achieved: float  # p00 + p11 - 1 of that POVM
    povm_zero: np.ndarray


def best_pauli_distinguisher(rho0: np.ndarray, rho1: np.ndarray) -> PauliDistinguisher:
    """Best single-Pauli two-outcome measurement separating orthogonal states."""
    overlap = abs(np.trace(rho0 @ rho1))
    if overlap > ORTHOGONALITY_TOL:
        raise ValueError(f"states are not orthogonal (overlap {overlap:.2e})")
    c0 = pauli_coefficients(rho0)
    c1 = pauli_coefficients(rho1)
    diff = c0.a - c1.a
    diff[0] = 0.0  # identity never separates
    best = int(np.argmax(np.abs(diff)))
    sign = 1 if diff[best] >= 0 else -1
    base = c0.labels[best]
    pauli = PauliString(base.n, base.x, base.z, sign)
    povm_zero = 0.5 * (np.eye(rho0.shape[0], dtype=complex) + pauli.dense())
    return PauliDistinguisher(pauli, 0.5 * abs(diff[best]), povm_zero)


def orthogonality_sum(rho0: np.ndarray, rho1: np.ndarray) -> float:
    """Sum over nonidentity Paulis of the coefficient products; equals -1
    exactly for orthogonal states."""
    a0 = pauli_coefficients(rho0).a
    a1 = pauli_coefficients(rho1).a
    return float(np.dot(a0[1:], a1[1:]))


def theorem1_curve(n: int, x: float) -> float:
    """Guaranteed p00 + p11 - 1 of some two-outcome LOCC measurement with
    outcome asymmetry x = p00 - p11, for any orthogonal pair on n pairs."""
    if abs(x) > 1.0:
        raise ValueError("outcome asymmetry lies in [-1, 1]")
    return math.sqrt(1.0 + x * x) / math.sqrt(16.0**n - 1.0)


# ---------------------------------------------------------------------------
# Classical information caps


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def channel_mutual_info(prior, rows) -> float:
    """Mutual information in bits between a binary input with the given prior
    and the output of the row-stochastic channel.

    `prior` is either P(X=0) as a scalar or the full length-2 distribution.
    """
    prior = np.atleast_1d(np.asarray(prior, dtype=float))
    if prior.size == 1:
        prior = np.array([prior[0], 1.0 - prior[0]])
    rows = np.asarray(rows, dtype=float)
    if rows.min() < -1e-12 or np.max(np.abs(rows.sum(axis=1) - 1.0)) > 1e-9:
        raise ValueError("channel rows must be probability vectors")
    joint = prior[:, None] * rows
    py = joint.sum(axis=0)
    info = 0.0
    for x in range(2):
        for j in range(rows.shape[1]):
            if joint[x, j] > 0.0:
                info += joint[x, j] * math.log2(joint[x, j] / (prior[x] * py[j]))
    return info


def decode_bias(rows) -> float:
    """Bias 2*P(correct) - 1 of the best guess of a uniform input from the output."""
    rows = np.asarray(rows, dtype=float)
    return float(np.maximum(rows[0], rows[1]).sum() - 1.0)


def mutual_info_cap(delta: float, prior_p0: float = 0.5) -> tuple[float, np.ndarray]:
    """Information cap delta * H(X) and the three-outcome channel attaining it
    ("certainly 0" / "certainly 1" / "don't know")."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError("bias must lie in [0, 1]")
    channel = np.array([[delta, 0.0, 1.0 - delta], [0.0, delta, 1.0 - delta]])
    return delta * binary_entropy(prior_p0), channel


# ---------------------------------------------------------------------------
# Entanglement floor for perfect unlocking


def emin_lower_bound(n: int) -> Fraction:
    """Ebits any perfectly unlocking measurement must consume, from the
    odd-label fraction of the full Bell ensemble."""
    _, n_odd = cardinalities(n)
    return Fraction(n_odd, 4**n)


def uniform_mixture_defect(n: int) -> float:
    """Max-norm gap between the weighted hiding-state pair and white noise."""
    n_even, n_odd = cardinalities(n)
    size = 4**n
    mix = (n_even * hiding_state(0, n).mat + n_odd * hiding_state(1, n).mat) / size
    return float(np.max(np.abs(mix - np.eye(size) / size)))


# ---------------------------------------------------------------------------
# Repetition bound for the separable tau pair


@dataclass(frozen=True)
class TauRepetition:
    bias: float  # (sqrt(3)/2)^n, conditional on the repetition conjecture
    qubit_overhead: float  # qubits per hidden bit this construction pays


def tau_repetition_bound(n: int) -> TauRepetition:
    if n < 1:
        raise ValueError("need at least one pair")
    return TauRepetition(
        (math.sqrt(3.0) / 2.0) ** n,
        1.0 / (1.0 - math.log2(math.sqrt(3.0))),
    )
