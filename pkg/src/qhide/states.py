"""Dense constructions of the hiding states, their Werner forms, and the tau family.

All bipartite operators use the block qubit ordering A_1..A_n B_1..B_n, with
``split = (2**n, 2**n)``.  Pair-local constructions are built per pair
(A_j B_j interleaved) and permuted into block order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .pauli import BellLabel, PauliString, all_unsigned, cardinalities, labels_with_parity

# Dimension caps keep everything desk-sized: dense construction tops out at
# n = 6 shares, eigensolves at n = 5.
MAX_CONSTRUCT_PAIRS = 6
MAX_EIGEN_PAIRS = 5

HERMITIAN_TOL = 1e-12
EIGEN_TOL = 1e-10

_BELL_COLUMNS = {
    0: np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2),
    1: np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2),
    2: np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2),
    3: np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2),
}


def _interleave_to_block_perm(n: int) -> list[int]:
    # qubit order A1 B1 ... An Bn  ->  A1 ... An B1 ... Bn
    return [2 * j for j in range(n)] + [2 * j + 1 for j in range(n)]


def permute_vector_qubits(vec: np.ndarray, perm: list[int]) -> np.ndarray:
    q = len(perm)
    return vec.reshape((2,) * q).transpose(perm).reshape(-1)

def permute_operator_qubits(mat: np.ndarray, perm: list[int]) -> np.ndarray:
    q = len(perm)
    axes = perm + [q + p for p in perm]
    return mat.reshape((2,) * (2 * q)).transpose(axes).reshape(mat.shape)


def tensor_bipartite(x: np.ndarray, a_pairs: int, y: np.ndarray, b_pairs: int) -> np.ndarray:
    """Tensor two block-ordered bipartite operators into one block-ordered operator."""
    m = np.kron(x, y)
    a, b = a_pairs, b_pairs
    perm = (
        list(range(a))
        + [2 * a + j for j in range(b)]
        + [a + j for j in range(a)]
        + [2 * a + b + j for j in range(b)]
    )
    return permute_operator_qubits(m, perm)


@dataclass(frozen=True)
class HermitianOperator:
    """Validated Hermitian matrix with a bipartite split (dim_A, dim_B)."""

    mat: np.ndarray
    split: tuple[int, int]

    def __post_init__(self):
        m = self.mat
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator must be square")
        if self.split[0] * self.split[1] != m.shape[0]:
            raise ValueError("split does not factor the dimension")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class DensityMatrix(HermitianOperator):
    """Hermitian, unit-trace, positive semidefinite (checked when dim allows)."""

    def __post_init__(self):
        super().__post_init__()
        if abs(np.trace(self.mat) - 1.0) > HERMITIAN_TOL:
            raise ValueError("trace must be 1")
        if self.dim <= 4**MAX_EIGEN_PAIRS:
            low = np.linalg.eigvalsh(self.mat)[0]
            if low < -EIGEN_TOL:
                raise ValueError(f"negative eigenvalue {low:.3e}")


def bell_state_vector(label: BellLabel) -> np.ndarray:
    """State vector of the labeled Bell product in block qubit order."""
    vec = reduce(np.kron, (_BELL_COLUMNS[p] for p in label.pairs))
    return permute_vector_qubits(vec, _interleave_to_block_perm(label.n))


def _check_pairs(n: int, cap: int = MAX_CONSTRUCT_PAIRS):
    if not 1 <= n <= cap:
        raise ValueError(f"pair count {n} outside supported range 1..{cap}")


def hiding_state(bit: int, n: int) -> DensityMatrix:
    """Uniform mixture of Bell products whose singlet-count parity equals ``bit``."""
    _check_pairs(n)
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    labels = labels_with_parity(n, bit)
    cols = np.column_stack([bell_state_vector(lab) for lab in labels])
    mat = (cols @ cols.conj().T) / len(labels)
    return DensityMatrix(mat, (2**n, 2**n))


def swap_operator() -> np.ndarray:
    s = np.zeros((4, 4), dtype=complex)
    for a in range(2):
        for b in range(2):
            s[(b << 1) | a, (a << 1) | b] = 1
    return s


def h_operator(n: int) -> HermitianOperator:
    """Tensor power of half the two-qubit swap, permuted to block order.

    Unit trace, eigenvalues +-2^-n; the hiding states are affine in it.
    """
    _check_pairs(n)
    h1 = 0.5 * swap_operator()
    mat = reduce(np.kron, [h1] * n)
    perm = _interleave_to_block_perm(n)
    return HermitianOperator(permute_operator_qubits(mat, perm), (2**n, 2**n))


def werner_form(bit: int, n: int) -> DensityMatrix:
    """Closed affine form of the hiding state in terms of the swap power."""
    _check_pairs(n)
    h = h_operator(n).mat
    d = 2**n
    eye = np.eye(d * d, dtype=complex)
    if bit == 0:
        mat = (eye + d * h) / (d * (d + 1))
    else:
        mat = (eye - d * h) / (d * (d - 1))
    return DensityMatrix(mat, (d, d))


def werner_form_check(bit: int, n: int) -> float:
    """Max-norm deviation between the mixture construction and its affine form."""
    return float(np.max(np.abs(hiding_state(bit, n).mat - werner_form(bit, n).mat)))


def mixing_weight(bit: int, n: int) -> Fraction:
    """Exact branch weight in the one-pair peeling recursion of the hiding states."""
    if n < 2:
        raise ValueError("recursion needs at least two pairs")
    if bit == 0:
        return Fraction(2 ** (n - 1) - 1, 2 * (2**n + 1))
    return Fraction(2 ** (n - 1) + 1, 2 * (2**n - 1))


def recursion_check(bit: int, n: int) -> float:
    """Max-norm gap of the peeling recursion at (bit, n).

    The n-pair hiding state must equal a two-branch mixture of (n-1)-pair and
    one-pair hiding states: for bit 0 the branches are (odd, odd) and
    (even, even); for bit 1 they are (even, odd) and (odd, even).
    """
    w = float(mixing_weight(bit, n))
    big = hiding_state(bit, n).mat
    if bit == 0:
        first = tensor_bipartite(hiding_state(1, n - 1).mat, n - 1, hiding_state(1, 1).mat, 1)
        second = tensor_bipartite(hiding_state(0, n - 1).mat, n - 1, hiding_state(0, 1).mat, 1)
    else:
        first = tensor_bipartite(hiding_state(0, n - 1).mat, n - 1, hiding_state(1, 1).mat, 1)
        second = tensor_bipartite(hiding_state(1, n - 1).mat, n - 1, hiding_state(0, 1).mat, 1)
    return float(np.max(np.abs(big - (w * first + (1 - w) * second))))


def maximally_mixed_check(n: int) -> float:
    """Max-norm gap of I/4^n against the label-count weighted mixture of both states."""
    _check_pairs(n)
    e, o = cardinalities(n)
    tot = 4**n
    mix = (e / tot) * hiding_state(0, n).mat + (o / tot) * hiding_state(1, n).mat
    return float(np.max(np.abs(mix - np.eye(tot) / tot)))


def partial_transpose(op: HermitianOperator) -> HermitianOperator:
    """Transpose the B factor."""
    da, db = op.split
    m = op.mat.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(op.dim, op.dim)
    return HermitianOperator(m, op.split)


def is_ppt(op: HermitianOperator, tol: float = EIGEN_TOL) -> bool:
    """True when the partial transpose has no eigenvalue below -tol."""
    if op.dim > 4**MAX_EIGEN_PAIRS:
        raise ValueError("dimension exceeds the eigensolve cap")
    low = np.linalg.eigvalsh(partial_transpose(op).mat)[0]
    return bool(low >= -tol)


# ---------------------------------------------------------------------------
# The separable tau family

_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)
_ZERO = np.array([1, 0], dtype=complex)
_ONE = np.array([0, 1], dtype=complex)


def _proj(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def tau_state(bit: int) -> DensityMatrix:
    """Two-qubit separable pair: equal mixtures of product states on one pair."""
    if bit == 0:
        mat = 0.5 * (np.kron(_proj(_PLUS), _proj(_ZERO)) + np.kron(_proj(_ZERO), _proj(_PLUS)))
    elif bit == 1:
        mat = 0.5 * (np.kron(_proj(_MINUS), _proj(_MINUS)) + np.kron(_proj(_ONE), _proj(_ONE)))
    else:
        raise ValueError("bit must be 0 or 1")
    return DensityMatrix(mat, (2, 2))


def tau_parity_state(bit: int, n: int) -> DensityMatrix:
    """Uniform mixture of tau products whose bits XOR to ``bit`` (block order)."""
    _check_pairs(n, cap=MAX_EIGEN_PAIRS)
    taus = (tau_state(0).mat, tau_state(1).mat)
    total = np.zeros((4**n, 4**n), dtype=complex)
    count = 0
    for bits in range(2**n):
        parity = bin(bits).count("1") & 1
        if parity != bit:
            continue
        acc = taus[(bits >> (n - 1)) & 1]
        for j in range(1, n):
            acc = tensor_bipartite(acc, j, taus[(bits >> (n - 1 - j)) & 1], 1)
        total += acc
        count += 1
    return DensityMatrix(total / count, (2**n, 2**n))


def pair_symmetrizer(rho: np.ndarray) -> np.ndarray:
    """Average over swap and the bilateral Hadamard on one pair (a 4-element group)."""
    s = swap_operator()
    had = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    hh = np.kron(had, had)
    return 0.25 * (rho + s @ rho @ s + hh @ rho @ hh + s @ hh @ rho @ hh @ s)


# ---------------------------------------------------------------------------
# Entanglement of formation for two-qubit states


_SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def _binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def concurrence(rho: np.ndarray) -> float:
    yy = np.kron(_SIGMA_Y, _SIGMA_Y)
    spin_flipped = rho @ yy @ rho.conj() @ yy
    # abs guards the sqrt against tiny negative numerical eigenvalues
    lams = np.sqrt(np.abs(np.linalg.eigvals(spin_flipped).real))
    lams = np.sort(lams)[::-1]
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def wootters_eof(rho: np.ndarray) -> float:
    """Entanglement of formation of a two-qubit density matrix."""
    if rho.shape != (4, 4):
        raise ValueError("two-qubit states only")
    c = concurrence(rho)
    return _binary_entropy(0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c))))


# ---------------------------------------------------------------------------
# Serialization: upper-triangle JSON records


def operator_to_record(op: HermitianOperator) -> dict:
    entries = []
    m = op.mat
    for r in range(op.dim):
        for c in range(r, op.dim):
            v = m[r, c]
            if v != 0:
                entries.append([r, c, float(v.real), float(v.imag)])
    return {"dim": op.dim, "split": list(op.split), "entries": entries}


def operator_from_record(rec: dict, density: bool = False) -> HermitianOperator:
    dim = int(rec["dim"])
    mat = np.zeros((dim, dim), dtype=complex)
    for r, c, re, im in rec["entries"]:
        mat[r, c] = re + 1j * im
        if c != r:
            mat[c, r] = re - 1j * im
    split = tuple(rec["split"])
    return DensityMatrix(mat, split) if density else HermitianOperator(mat, split)


def save_operator(op: HermitianOperator, path: str):
    with open(path, "w") as fh:
        json.dump(operator_to_record(op), fh)


def load_operator(path: str, density: bool = False) -> HermitianOperator:
    with open(path) as fh:
        return operator_from_record(json.load(fh), density=density)
