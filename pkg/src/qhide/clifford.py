"""Tableau Clifford engine: conjugation, enumeration, random walks, synthesis, twirl.

An element is stored by the signed images of the single-qubit X and Z
generators.  The generating set is the n^2 + 2n gates
``{H_i, P_i, PD_i, CNOT_(j,k) for ordered j != k}``; every member is its own
inverse except P/PD, which invert each other.

Synthesis emits at most ``3 n^2 + 7 n + SYNTH_GATE_MARGIN`` gates; the margin
constant is declared below and the bound is asserted on every call.  The lazy
generator walk holds still with probability 1/2, so its least likely move has
probability ``1 / (2 (n^2 + 2n))``; the conservative step-count policy combines
that with the synthesis bound used as a Cayley diameter estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .pauli import PauliString, commutes, pauli_mul, _mul_bits

SYNTH_GATE_MARGIN = 6

_GATE_ARITY = {"H": 1, "P": 1, "PD": 1, "CNOT": 2}


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.name not in _GATE_ARITY:
            raise ValueError(f"unknown gate {self.name!r}")
        if len(self.qubits) != _GATE_ARITY[self.name]:
            raise ValueError(f"{self.name} takes {_GATE_ARITY[self.name]} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate qubits must be distinct")

    def to_text(self) -> str:
        return " ".join([self.name, *map(str, self.qubits)])

    @classmethod
    def from_text(cls, line: str) -> "Gate":
        parts = line.split()
        return cls(parts[0], tuple(int(q) for q in parts[1:]))


@dataclass(frozen=True)
class CliffordCircuit:
    n: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        for g in self.gates:
            if any(q < 0 or q >= self.n for q in g.qubits):
                raise ValueError("gate qubit out of range")

    def __len__(self) -> int:
        return len(self.gates)

    def to_text(self) -> str:
        return "\n".join(g.to_text() for g in self.gates)

    @classmethod
    def from_text(cls, n: int, text: str) -> "CliffordCircuit":
        gates = tuple(
            Gate.from_text(line) for line in text.splitlines() if line.strip()
        )
        return cls(n, gates)


@dataclass(frozen=True)
class CliffordElement:
    """Signed images (a_1..a_n, b_1..b_n) of the X and Z generators."""

    n: int
    images: tuple[PauliString, ...]

    def __post_init__(self):
        if len(self.images) != 2 * self.n:
            raise ValueError("need 2n images")
        if any(p.n != self.n for p in self.images):
            raise ValueError("image width mismatch")

    def x_image(self, i: int) -> PauliString:
        return self.images[i]

    def z_image(self, i: int) -> PauliString:
        return self.images[self.n + i]

    def key(self) -> tuple:
        return tuple((p.x, p.z, p.sign) for p in self.images)

    def validate(self):
        """Check the symplectic relations the images must satisfy."""
        n = self.n
        for i in range(2 * n):
            pi = self.images[i]
            if pi.is_identity():
                raise ValueError("images must be traceless")
            for j in range(i + 1, 2 * n):
                pj = self.images[j]
                conjugate_pair = (j == i + n)
                if conjugate_pair == commutes(pi, pj):
                    raise ValueError(f"wrong commutation between images {i} and {j}")


def identity_element(n: int) -> CliffordElement:
    imgs = [PauliString.single(n, i, "X") for i in range(n)]
    imgs += [PauliString.single(n, i, "Z") for i in range(n)]
    return CliffordElement(n, tuple(imgs))


def conjugate(c: CliffordElement, p: PauliString) -> PauliString:
    """Image of a signed Pauli under conjugation by the element.

    The input is decomposed as a phase times an ordered product of X and Z
    generators; the output multiplies the stored images in the same order.
    """
    if c.n != p.n:
        raise ValueError("qubit counts differ")
    n = p.n
    # i-exponent: Y letters of p contribute one factor each, signs two.
    e = (p.x & p.z).bit_count() % 4
    if p.sign < 0:
        e += 2
    ax = az = 0
    for j in range(n):
        shift = n - 1 - j
        for img in (
            c.images[j] if (p.x >> shift) & 1 else None,
            c.images[n + j] if (p.z >> shift) & 1 else None,
        ):
            if img is None:
                continue
            ax, az, de = _mul_bits(ax, az, img.x, img.z)
            e += de
            if img.sign < 0:
                e += 2
    e %= 4
    if e % 2:
        raise AssertionError("conjugation produced a non-Hermitian phase")
    return PauliString(n, ax, az, 1 if e == 0 else -1)


def compose(c1: CliffordElement, c2: CliffordElement) -> CliffordElement:
    """Element acting as c2 first, then c1."""
    if c1.n != c2.n:
        raise ValueError("qubit counts differ")
    return CliffordElement(c1.n, tuple(conjugate(c1, p) for p in c2.images))


def inverse(c: CliffordElement) -> CliffordElement:
    """Invert the symplectic action over GF(2), then fix image signs."""
    n = c.n
    # columns of the binary matrix: symplectic coords (x bits | z bits) of images
    rows = 2 * n
    mat = np.zeros((2 * n, rows), dtype=np.uint8)
    for col, img in enumerate(c.images):
        for j in range(n):
            shift = n - 1 - j
            mat[j, col] = (img.x >> shift) & 1
            mat[n + j, col] = (img.z >> shift) & 1
    inv = _gf2_inverse(mat)
    gens = identity_element(n).images
    images = []
    for i in range(2 * n):
        # target generator i is the product of images selected by inv column i,
        # so the preimage is the same product of generators, sign-corrected.
        acc = PauliString.identity(n)
        for k in range(2 * n):
            if inv[k, i]:
                # phase dropped: only the Hermitian representative matters here
                acc, _ = pauli_mul(acc, gens[k])
        check = conjugate(c, acc)
        if check.sign != gens[i].sign:
            acc = acc.negate()
        images.append(acc)
    out = CliffordElement(n, tuple(images))
    return out


def _gf2_inverse(mat: np.ndarray) -> np.ndarray:
    m = mat.copy() % 2
    k = m.shape[0]
    aug = np.concatenate([m, np.eye(k, dtype=np.uint8)], axis=1)
    row = 0
    for col in range(k):
        piv = next((r for r in range(row, k) if aug[r, col]), None)
        if piv is None:
            raise ValueError("matrix not invertible over GF(2)")
        aug[[row, piv]] = aug[[piv, row]]
        for r in range(k):
            if r != row and aug[r, col]:
                aug[r] ^= aug[row]
        row += 1
    return aug[:, k:]


# ---------------------------------------------------------------------------
# Generators


@lru_cache(maxsize=None)
def generator_gates(n: int) -> tuple[Gate, ...]:
    gates = [Gate("H", (i,)) for i in range(n)]
    gates += [Gate("P", (i,)) for i in range(n)]
    gates += [Gate("PD", (i,)) for i in range(n)]
    gates += [
        Gate("CNOT", (j, k)) for j in range(n) for k in range(n) if j != k
    ]
    return tuple(gates)


def gate_element(n: int, gate: Gate) -> CliffordElement:
    base = list(identity_element(n).images)
    if gate.name == "H":
        (i,) = gate.qubits
        base[i] = PauliString.single(n, i, "Z")
        base[n + i] = PauliString.single(n, i, "X")
    elif gate.name == "P":
        (i,) = gate.qubits
        base[i] = PauliString.single(n, i, "Y")
    elif gate.name == "PD":
        (i,) = gate.qubits
        base[i] = PauliString.single(n, i, "Y", sign=-1)
    elif gate.name == "CNOT":
        ctrl, tgt = gate.qubits
        xc = PauliString.single(n, ctrl, "X")
        xt = PauliString.single(n, tgt, "X")
        zc = PauliString.single(n, ctrl, "Z")
        zt = PauliString.single(n, tgt, "Z")
        base[ctrl], _ = pauli_mul(xc, xt)
        base[n + tgt], _ = pauli_mul(zc, zt)
    return CliffordElement(n, tuple(base))


@lru_cache(maxsize=None)
def generator_elements(n: int) -> tuple[CliffordElement, ...]:
    return tuple(gate_element(n, g) for g in generator_gates(n))


_H_DENSE = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_P_DENSE = np.diag([1, 1j]).astype(complex)
_PD_DENSE = np.diag([1, -1j]).astype(complex)


def gate_matrix(n: int, gate: Gate) -> np.ndarray:
    if gate.name in ("H", "P", "PD"):
        single = {"H": _H_DENSE, "P": _P_DENSE, "PD": _PD_DENSE}[gate.name]
        mats = [single if j == gate.qubits[0] else np.eye(2) for j in range(n)]
        return reduce(np.kron, mats).astype(complex)
    ctrl, tgt = gate.qubits
    dim = 2**n
    m = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        if (idx >> (n - 1 - ctrl)) & 1:
            out = idx ^ (1 << (n - 1 - tgt))
        else:
            out = idx
        m[out, idx] = 1
    return m


def apply_circuit(circ: CliffordCircuit, start: CliffordElement | None = None) -> CliffordElement:
    cur = start if start is not None else identity_element(circ.n)
    for g in circ.gates:
        cur = compose(gate_element(circ.n, g), cur)
    return cur


def circuit_unitary(circ: CliffordCircuit) -> np.ndarray:
    u = np.eye(2**circ.n, dtype=complex)
    for g in circ.gates:
        u = gate_matrix(circ.n, g) @ u
    return u


def element_unitary(c: CliffordElement) -> np.ndarray:
    """Dense representative (global phase arbitrary) via synthesis."""
    return circuit_unitary(synthesize_circuit(c))


# ---------------------------------------------------------------------------
# Enumeration (n <= 2) and the lazy generator walk


def group_order(n: int) -> int:
    """Order including the 8 global phases; divide by 8 for the projective count."""
    order = 2 ** (n * n + 2 * n + 3)
    for j in range(1, n + 1):
        order *= 4**j - 1
    return order


def enumerate_group(n: int, with_unitaries: bool = False):
    """Breadth-first closure of the generators; projective elements only.

    Supported for n <= 2 (24 and 11520 elements).  With ``with_unitaries`` a
    dense representative is carried along for each element.
    """
    if n > 2:
        raise ValueError("exhaustive enumeration supported only for n <= 2")
    gens = generator_elements(n)
    gen_mats = [gate_matrix(n, g) for g in generator_gates(n)] if with_unitaries else None
    start = identity_element(n)
    elements = [start]
    unitaries = [np.eye(2**n, dtype=complex)] if with_unitaries else None
    seen = {start.key(): 0}
    head = 0
    while head < len(elements):
        cur = elements[head]
        for gi, g in enumerate(gens):
            nxt = compose(g, cur)
            k = nxt.key()
            if k not in seen:
                seen[k] = len(elements)
                elements.append(nxt)
                if with_unitaries:
                    unitaries.append(gen_mats[gi] @ unitaries[head])
        head += 1
    expected = group_order(n) // 8
    if len(elements) != expected:
        raise AssertionError(f"enumerated {len(elements)} elements, expected {expected}")
    if with_unitaries:
        return elements, unitaries
    return elements


@lru_cache(maxsize=None)
def _walk_table(n: int) -> tuple[tuple, np.ndarray]:
    """Composition table T[g, e] = index of (generator g after element e)."""
    elements = enumerate_group(n)
    index = {el.key(): i for i, el in enumerate(elements)}
    gens = generator_elements(n)
    table = np.empty((len(gens), len(elements)), dtype=np.int32)
    for gi, g in enumerate(gens):
        for ei, el in enumerate(elements):
            table[gi, ei] = index[compose(g, el).key()]
    return tuple(elements), table


def random_walk_sample(n: int, steps: int, seed, lazy: bool = True) -> CliffordElement:
    """One lazy-walk sample: each step holds still with probability 1/2."""
    rng = np.random.default_rng(seed)
    gens = generator_elements(n)
    cur = identity_element(n)
    for _ in range(steps):
        if lazy and rng.random() < 0.5:
            continue
        cur = compose(gens[rng.integers(len(gens))], cur)
    return cur


def walk_ensemble_indices(n: int, steps: int, samples: int, seed, lazy: bool = True) -> np.ndarray:
    """Vectorized walk over the enumerated group; returns element indices."""
    _, table = _walk_table(n)
    rng = np.random.default_rng(seed)
    cur = np.zeros(samples, dtype=np.int64)
    n_gens = table.shape[0]
    for _ in range(steps):
        move = rng.random(samples) >= 0.5 if lazy else np.ones(samples, dtype=bool)
        gsel = rng.integers(0, n_gens, samples)
        cur[move] = table[gsel[move], cur[move]]
    return cur


def walk_distribution(n: int, steps: int, lazy: bool = True) -> np.ndarray:
    """Exact element distribution of the walk after ``steps`` steps."""
    _, table = _walk_table(n)
    n_gens, size = table.shape
    inv_perms = [np.argsort(table[g]) for g in range(n_gens)]
    p = np.zeros(size)
    p[0] = 1.0
    hold = 0.5 if lazy else 0.0
    move = (1.0 - hold) / n_gens
    for _ in range(steps):
        nxt = hold * p
        for g in range(n_gens):
            nxt += move * p[inv_perms[g]]
        p = nxt
    return p


def image_walk_distribution(n: int, steps: int, start: PauliString, lazy: bool = True):
    """Exact distribution of one generator image along the walk.

    The image of a fixed Pauli evolves by conjugation with each drawn
    generator, which is itself a Markov chain on signed Pauli strings.
    """
    states = []
    index = {}
    for x in range(1 << n):
        for z in range(1 << n):
            if x == 0 and z == 0:
                continue
            for sign in (1, -1):
                index[(x, z, sign)] = len(states)
                states.append(PauliString(n, x, z, sign))
    gens = generator_elements(n)
    tables = np.empty((len(gens), len(states)), dtype=np.int64)
    for gi, g in enumerate(gens):
        for si, s in enumerate(states):
            out = conjugate(g, s)
            tables[gi, si] = index[(out.x, out.z, out.sign)]
    p = np.zeros(len(states))
    p[index[(start.x, start.z, start.sign)]] = 1.0
    hold = 0.5 if lazy else 0.0
    move = (1.0 - hold) / len(gens)
    inv = [np.argsort(tables[g]) for g in range(len(gens))]
    for _ in range(steps):
        nxt = hold * p
        for g in range(len(gens)):
            nxt += move * p[inv[g]]
        p = nxt
    return states, p


def walk_length_policy(n: int, epsilon: float) -> int:
    """Smallest step count certifying L1 distance <= epsilon to uniform.

    Uses the conservative spectral bound: second eigenvalue at most
    1 - eta / d^2 with eta the least likely generator probability of the lazy
    walk and d the synthesis gate budget standing in for the Cayley diameter.
    """
    if epsilon <= 0 or epsilon >= 1:
        raise ValueError("epsilon must be in (0, 1)")
    eta = 1.0 / (2 * (n * n + 2 * n))
    d = 3 * n * n + 7 * n + SYNTH_GATE_MARGIN
    gap = eta / (d * d)
    target = math.log(math.sqrt(group_order(n)) / epsilon)
    return math.ceil(target / -math.log1p(-gap))


# ---------------------------------------------------------------------------
# Synthesis


def synthesize_circuit(c: CliffordElement) -> CliffordCircuit:
    """Gate sequence from the generating set reproducing the element exactly.

    Column-by-column tableau elimination: put the X image of each qubit into
    standard form, then its Z image, then fix residual signs with Pauli layers
    built from H and P.  Gate count is at most 3 n^2 + 7 n + SYNTH_GATE_MARGIN.
    """
    c.validate()
    n = c.n
    work = list(c.images)
    applied: list[Gate] = []

    def apply(gate: Gate):
        el = gate_element(n, gate)
        for idx in range(2 * n):
            work[idx] = conjugate(el, work[idx])
        applied.append(gate)

    def xbit(p: PauliString, j: int) -> int:
        return (p.x >> (n - 1 - j)) & 1

    def zbit(p: PauliString, j: int) -> int:
        return (p.z >> (n - 1 - j)) & 1

    def clear_tail(row: int, pivot: int):
        # remove all support to the right of the pivot; pivot column has X
        p = work[row]
        for j in range(pivot + 1, n):
            xb, zb = xbit(p, j), zbit(p, j)
            if not (xb or zb):
                continue
            if xb and zb:
                apply(Gate("P", (j,)))
            elif zb:
                apply(Gate("H", (j,)))
            apply(Gate("CNOT", (pivot, j)))
            p = work[row]

    for i in range(n):
        row = work[i]
        # choose a pivot column carrying X, hadamarding a Z-only column if needed
        piv = next((j for j in range(i, n) if xbit(row, j)), None)
        if piv is None:
            piv = next(j for j in range(i, n) if zbit(row, j))
            apply(Gate("H", (piv,)))
        if piv != i:
            apply(Gate("CNOT", (i, piv)))
            apply(Gate("CNOT", (piv, i)))
            apply(Gate("CNOT", (i, piv)))
        clear_tail(i, i)
        if zbit(work[i], i):
            apply(Gate("P", (i,)))
        # now the X image is +-X_i; reduce the Z image
        zrow = work[n + i]
        if zbit(zrow, i) and not xbit(zrow, i) and zrow.weight() == 1:
            continue
        apply(Gate("H", (i,)))
        clear_tail(n + i, i)
        if zbit(work[n + i], i):
            apply(Gate("P", (i,)))
        apply(Gate("H", (i,)))

    # sign-fixing layer: conjugating by Z flips the X image, X flips the Z image
    for i in range(n):
        if work[i].sign < 0:
            apply(Gate("P", (i,)))
            apply(Gate("P", (i,)))
        if work[n + i].sign < 0:
            apply(Gate("H", (i,)))
            apply(Gate("P", (i,)))
            apply(Gate("P", (i,)))
            apply(Gate("H", (i,)))

    if tuple((p.x, p.z, p.sign) for p in work) != identity_element(n).key():
        raise AssertionError("elimination did not reach the identity tableau")

    # applied gates g1..gm satisfy gm..g1 c = 1, so c = g1^-1 .. gm^-1 read
    # right to left as a circuit
    inv = {"H": "H", "CNOT": "CNOT", "P": "PD", "PD": "P"}
    gates = tuple(Gate(inv[g.name], g.qubits) for g in reversed(applied))
    budget = 3 * n * n + 7 * n + SYNTH_GATE_MARGIN
    if len(gates) > budget:
        raise AssertionError(f"synthesis used {len(gates)} gates, budget {budget}")
    return CliffordCircuit(n, gates)


# ---------------------------------------------------------------------------
# Bilateral twirl


@lru_cache(maxsize=None)
def _twirl_superoperator(n: int) -> np.ndarray:
    _, unis = enumerate_group(n, with_unitaries=True)
    dim = 4**n
    stack = np.stack([np.kron(u, u) for u in unis])
    sup = np.einsum("nac,nbd->abcd", stack, stack.conj()).reshape(dim * dim, dim * dim)
    return sup / len(unis)


def clifford_twirl_dense(rho: np.ndarray, n: int) -> np.ndarray:
    """Exhaustive group average of (c (x) c) rho (c (x) c)^dag, n <= 2."""
    dim = 4**n
    if rho.shape != (dim, dim):
        raise ValueError("operator dimension mismatch")
    sup = _twirl_superoperator(n)
    return (sup @ rho.reshape(-1)).reshape(dim, dim)
