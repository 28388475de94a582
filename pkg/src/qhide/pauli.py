"""Bit-packed symplectic algebra for Hermitian Pauli strings and Bell-pair labels.

Conventions used throughout the package:

* Qubit ``j`` of an n-qubit string is the j-th letter of the text form and the
  j-th kron factor, so qubit 0 is the most significant index bit.
* Per-qubit ``(x, z)`` bits name ``I=(0,0)``, ``X=(1,0)``, ``Z=(0,1)``,
  ``Y=(1,1)``.  The ``(1,1)`` letter is the Hermitian sigma_y, so every
  PauliString carries only a +-1 sign and squares to the identity.
* A Bell label packs one 2-bit value per shared pair.  The first bit flips the
  amplitude (moves support to |01>,|10>), the second flips the relative phase.
  Pair value 3 ("11") is the singlet.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

_LETTER_OF_BITS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS_OF_LETTER = {v: k for k, v in _LETTER_OF_BITS.items()}

_SINGLE_DENSE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """Signed Hermitian Pauli string on ``n`` qubits, bit-packed as (x, z) ints."""

    n: int
    x: int
    z: int
    sign: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one qubit")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("x/z bits exceed qubit count")

    # bit j of x/z corresponds to letter j: letter 0 is the high kron factor
    def _bit(self, word: int, j: int) -> int:
        return (word >> (self.n - 1 - j)) & 1

    def letter(self, j: int) -> str:
        return _LETTER_OF_BITS[(self._bit(self.x, j), self._bit(self.z, j))]

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def negate(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, -self.sign)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 1)

    @classmethod
    def single(cls, n: int, j: int, letter: str, sign: int = 1) -> "PauliString":
        """Pauli acting as ``letter`` on qubit j and identity elsewhere."""
        xb, zb = _BITS_OF_LETTER[letter]
        shift = n - 1 - j
        return cls(n, xb << shift, zb << shift, sign)

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        """Parse '+XZIY' style text; sign prefix optional."""
        text = text.strip()
        sign = 1
        if text and text[0] in "+-":
            sign = 1 if text[0] == "+" else -1
            text = text[1:]
        if not text or any(ch not in _BITS_OF_LETTER for ch in text):
            raise ValueError(f"malformed Pauli text: {text!r}")
        n = len(text)
        x = z = 0
        for ch in text:
            xb, zb = _BITS_OF_LETTER[ch]
            x = (x << 1) | xb
            z = (z << 1) | zb
        return cls(n, x, z, sign)

    def to_text(self) -> str:
        body = "".join(self.letter(j) for j in range(self.n))
        return ("+" if self.sign > 0 else "-") + body

    def __str__(self) -> str:
        return self.to_text()

    def dense(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix with qubit 0 as the most significant factor."""
        mats = [_SINGLE_DENSE[self.letter(j)] for j in range(self.n)]
        return self.sign * reduce(np.kron, mats)


def _mul_bits(x1: int, z1: int, x2: int, z2: int) -> tuple[int, int, int]:
    # Per qubit: P(x1,z1) P(x2,z2) = i^e P(x1^x2, z1^z2) with
    # e = x1 z1 + x2 z2 - x3 z3 + 2 z1 x2 (mod 4), summed over qubits.
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    e = (
        (x1 & z1).bit_count()
        + (x2 & z2).bit_count()
        - (x3 & z3).bit_count()
        + 2 * (z1 & x2).bit_count()
    ) % 4
    return x3, z3, e


def pauli_mul(p: PauliString, q: PauliString) -> tuple[PauliString, complex]:
    """Product p q as (result, phase) with dense(p) @ dense(q) == phase * dense(result).

    Real phases are folded into the result sign, so the returned phase is 1
    exactly when the product is Hermitian.
    """
    if p.n != q.n:
        raise ValueError("qubit counts differ")
    x3, z3, e = _mul_bits(p.x, p.z, q.x, q.z)
    if p.sign < 0:
        e += 2
    if q.sign < 0:
        e += 2
    e %= 4
    if e % 2 == 0:
        return PauliString(p.n, x3, z3, 1 if e == 0 else -1), 1 + 0j
    return PauliString(p.n, x3, z3, 1), (1j if e == 1 else -1j)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True when the dense matrices commute (symplectic form vanishes)."""
    if p.n != q.n:
        raise ValueError("qubit counts differ")
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) % 2 == 0


def all_unsigned(n: int):
    """Iterate the 4^n unsigned Pauli strings in (x, z) lexicographic order."""
    for x in range(1 << n):
        for z in range(1 << n):
            yield PauliString(n, x, z, 1)


# ---------------------------------------------------------------------------
# Bell labels


@dataclass(frozen=True)
class BellLabel:
    """Label of a tensor product of n two-qubit Bell states.

    ``pairs[j]`` is the 2-bit value of pair j: bit 1 (high) is the amplitude
    bit, bit 0 the phase bit.  Value 3 is the singlet.
    """

    n: int
    pairs: tuple[int, ...]

    def __post_init__(self):
        if len(self.pairs) != self.n:
            raise ValueError("pair count mismatch")
        if any(p < 0 or p > 3 for p in self.pairs):
            raise ValueError("pair values must be 2-bit")

    @classmethod
    def from_text(cls, text: str) -> "BellLabel":
        """Parse dotted bit pairs, e.g. '11.01'."""
        parts = text.strip().split(".")
        pairs = []
        for part in parts:
            if len(part) != 2 or any(ch not in "01" for ch in part):
                raise ValueError(f"malformed Bell label: {text!r}")
            pairs.append((int(part[0]) << 1) | int(part[1]))
        return cls(len(pairs), tuple(pairs))

    def to_text(self) -> str:
        return ".".join(f"{p >> 1}{p & 1}" for p in self.pairs)

    def __str__(self) -> str:
        return self.to_text()

    @classmethod
    def from_index(cls, n: int, idx: int) -> "BellLabel":
        if not 0 <= idx < 4**n:
            raise ValueError("index out of range")
        pairs = tuple((idx >> (2 * (n - 1 - j))) & 3 for j in range(n))
        return cls(n, pairs)

    def index(self) -> int:
        idx = 0
        for p in self.pairs:
            idx = (idx << 2) | p
        return idx

    def n_singlets(self) -> int:
        return sum(1 for p in self.pairs if p == 3)

    def parity(self) -> int:
        """Hidden bit carried by this label: singlet count mod 2."""
        return self.n_singlets() & 1

    def amplitude_bits(self) -> tuple[int, ...]:
        return tuple(p >> 1 for p in self.pairs)

    def xor(self, other: "BellLabel") -> "BellLabel":
        if self.n != other.n:
            raise ValueError("pair counts differ")
        return BellLabel(self.n, tuple(a ^ b for a, b in zip(self.pairs, other.pairs)))


def bell_phase_action(c: int, k: int) -> int:
    """Eigenvalue of sigma_c (x) sigma_c on the Bell state labeled k.

    Both arguments are 2-bit values; for Paulis the high bit is the x bit, so
    I=0, Z=1, X=2, Y=3.  Returns +1 or -1.
    """
    if not (0 <= c <= 3 and 0 <= k <= 3):
        raise ValueError("labels must be 2-bit values")
    k1, k2 = (k >> 1) & 1, k & 1
    c1, c2 = (c >> 1) & 1, c & 1
    # the kept-pair factor anticommutes per the symplectic form; sigma_y's
    # transpose flips one more sign
    return -1 if ((k1 & c2) ^ (k2 & c1) ^ (c1 & c2)) else 1


def cardinalities(n: int) -> tuple[int, int]:
    """Counts (even, odd) of n-pair Bell labels by singlet-count parity."""
    if n < 1:
        raise ValueError("need at least one pair")
    even = (4**n + 2**n) // 2
    odd = (4**n - 2**n) // 2
    return even, odd


def even_labels(n: int) -> list[BellLabel]:
    return [
        lab
        for lab in (BellLabel.from_index(n, i) for i in range(4**n))
        if lab.parity() == 0
    ]


def odd_labels(n: int) -> list[BellLabel]:
    return [
        lab
        for lab in (BellLabel.from_index(n, i) for i in range(4**n))
        if lab.parity() == 1
    ]


def labels_with_parity(n: int, bit: int) -> list[BellLabel]:
    return odd_labels(n) if bit else even_labels(n)
