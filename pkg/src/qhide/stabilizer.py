"""Measurement-capable stabilizer simulator over signed Pauli generators.

Tracks a pure stabilizer state as a full set of commuting generators and
supports projective measurement of arbitrary Pauli observables, including the
collapse bookkeeping that the Bell-label picture cannot express (for example
bilateral parity checks on product-state pairs, which entangle across pairs).
"""

from __future__ import annotations

import numpy as np

from .pauli import BellLabel, PauliString, commutes, pauli_mul


class StabilizerState:
    """n-qubit pure state stabilized by the n generators in `gens`."""

    def __init__(self, n: int, gens: list[PauliString]):
        if len(gens) != n:
            raise ValueError("a pure state needs exactly n generators")
        for i, g in enumerate(gens):
            if g.n != n:
                raise ValueError("generator width mismatch")
            for h in gens[i + 1 :]:
                if not commutes(g, h):
                    raise ValueError("generators must commute")
        self.n = n
        self.gens = list(gens)

    @classmethod
    def all_zero(cls, n: int) -> "StabilizerState":
        return cls(n, [PauliString.single(n, j, "Z") for j in range(n)])

    @classmethod
    def bell_pairs(cls, label: BellLabel) -> "StabilizerState":
        """Pairs in block layout: qubit i and qubit m+i form pair i."""
        m = label.n
        gens = []
        for i, value in enumerate(label.pairs):
            amp, phase = value >> 1, value & 1
            xx = pauli_mul(
                PauliString.single(2 * m, i, "X"), PauliString.single(2 * m, m + i, "X")
            )[0]
            zz = pauli_mul(
                PauliString.single(2 * m, i, "Z"), PauliString.single(2 * m, m + i, "Z")
            )[0]
            gens.append(xx.negate() if phase else xx)
            gens.append(zz.negate() if amp else zz)
        return cls(2 * m, gens)

    def _bits(self, p: PauliString) -> int:
        return (p.x << self.n) | p.z

    def measure(self, obs: PauliString, rng: np.random.Generator) -> int:
        """Measure the +-1 observable; returns the eigenvalue and collapses."""
        if obs.n != self.n:
            raise ValueError("observable width mismatch")
        anti = [i for i, g in enumerate(self.gens) if not commutes(obs, g)]
        if anti:
            pivot = anti[0]
            gp = self.gens[pivot]
            for i in anti[1:]:
                prod, phase = pauli_mul(self.gens[i], gp)
                if phase != 1:
                    raise AssertionError("commuting generator product left a phase")
                self.gens[i] = prod
            outcome = 1 if rng.random() < 0.5 else -1
            self.gens[pivot] = PauliString(obs.n, obs.x, obs.z, outcome * obs.sign)
            return outcome
        # deterministic branch: express obs over the generator group, keeping
        # the row set in fully reduced form so one pass closes the span test
        rows: list[tuple[int, int, int]] = []  # (pivot bit, bits, generator mask)
        for i, g in enumerate(self.gens):
            bits, used = self._bits(g), 1 << i
            for pivot, pbits, pused in rows:
                if bits >> pivot & 1:
                    bits ^= pbits
                    used ^= pused
            if not bits:
                raise AssertionError("dependent stabilizer generators")
            pivot = bits.bit_length() - 1
            rows = [
                (pv, pb ^ bits, pu ^ used) if pb >> pivot & 1 else (pv, pb, pu)
                for pv, pb, pu in rows
            ]
            rows.append((pivot, bits, used))
        target, used = self._bits(obs), 0
        for pivot, pbits, pused in rows:
            if target >> pivot & 1:
                target ^= pbits
                used ^= pused
        if target != 0:
            raise AssertionError("commuting observable outside the generator span")
        acc = PauliString.identity(self.n)
        for i in range(self.n):
            if used >> i & 1:
                acc, phase = pauli_mul(acc, self.gens[i])
                if phase != 1:
                    raise AssertionError("stabilizer product left a phase")
        if (acc.x, acc.z) != (obs.x, obs.z):
            raise AssertionError("generator reduction mismatch")
        return acc.sign * obs.sign

    def copy(self) -> "StabilizerState":
        return StabilizerState(self.n, list(self.gens))
