"""LOCC protocols against the hiding states: the pairwise attack, the two-step
measurement that unlocks the separable tau pair, and state preparation routines.

Monte Carlo runs split their seed per fixed-size block so aggregates do not
depend on how blocks are scheduled across threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import clifford
from .pauli import BellLabel, labels_with_parity
from .states import pair_symmetrizer, tau_state

MC_BLOCK = 8192


@dataclass(frozen=True)
class CondProbs:
    """Conditional success probabilities p(guess 0 | bit 0) and p(guess 1 | bit 1)."""

    p00: float
    p11: float


@dataclass(frozen=True)
class McCondProbs:
    p00: float
    p11: float
    se00: float
    se11: float
    trials: int


@dataclass(frozen=True)
class TrialRecord:
    """One simulated pairwise-attack trial."""

    hidden_bit: int
    label: BellLabel
    alice_bits: tuple[int, ...]
    bob_bits: tuple[int, ...]
    decoded_bit: int


def _block_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, *key)))


# ---------------------------------------------------------------------------
# Pairwise computational-basis attack


def pairwise_attack_exact_fractions(n: int) -> tuple[Fraction, Fraction]:
    """Exact conditional probabilities of the pairwise attack via level recursion.

    Both sides measure each pair in the computational basis and infer a singlet
    from each disagreement; the guess is the parity of inferred singlets.
    Outcomes disagree with probability 1 on amplitude-flipped pairs and 0 on
    the others, so the per-level conditionals recurse through the one-pair
    peeling weights of the hiding states.
    """
    if n < 1:
        raise ValueError("need at least one pair")
    p00, p11 = Fraction(2, 3), Fraction(1, 1)
    for m in range(2, n + 1):
        q = Fraction(2 ** (m - 1) - 1, 2 * (2**m + 1))
        p = Fraction(2 ** (m - 1) + 1, 2 * (2**m - 1))
        p10, p01 = 1 - p00, 1 - p11
        base00, base10 = Fraction(2, 3), Fraction(1, 3)
        base01, base11 = Fraction(0, 1), Fraction(1, 1)
        new00 = (1 - q) * (base00 * p00 + base10 * p10) + q * (base01 * p01 + base11 * p11)
        new11 = (1 - p) * (base00 * p11 + base10 * p01) + p * (base01 * p10 + base11 * p00)
        p00, p11 = new00, new11
    return p00, p11


def pairwise_attack_closed_form(n: int) -> tuple[Fraction, Fraction]:
    return (
        Fraction(2**n + 2, 2 * (2**n + 1)),
        Fraction(2**n, 2 * (2**n - 1)),
    )


def pairwise_attack_exact(n: int) -> CondProbs:
    rec = pairwise_attack_exact_fractions(n)
    closed = pairwise_attack_closed_form(n)
    if rec != closed:
        raise AssertionError("recursion disagrees with the closed form")
    return CondProbs(float(closed[0]), float(closed[1]))


def _attack_block(n: int, bit: int, trials: int, seed: int, block: int) -> int:
    rng = _block_rng(seed, bit, block)
    labels = labels_with_parity(n, bit)
    amp = np.array([[p >> 1 for p in lab.pairs] for lab in labels], dtype=np.int8)
    pick = rng.integers(0, len(labels), trials)
    decoded = amp[pick].sum(axis=1) & 1
    return int(np.count_nonzero(decoded == bit))


def pairwise_attack_mc(n: int, trials: int, seed: int, threads: int = 1) -> McCondProbs:
    """Monte Carlo pairwise attack; exact per-pair statistics, sampled labels."""
    if trials < 1:
        raise ValueError("need at least one trial")
    blocks = [(b, min(MC_BLOCK, trials - b * MC_BLOCK)) for b in range((trials + MC_BLOCK - 1) // MC_BLOCK)]
    hits = {0: 0, 1: 0}
    for bit in (0, 1):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                counts = pool.map(
                    lambda blk: _attack_block(n, bit, blk[1], seed, blk[0]), blocks
                )
                hits[bit] = sum(counts)
        else:
            hits[bit] = sum(_attack_block(n, bit, size, seed, b) for b, size in blocks)
    p00 = hits[0] / trials
    p11 = hits[1] / trials
    se = lambda p: float(np.sqrt(max(p * (1 - p), 1e-300) / trials))
    return McCondProbs(p00, p11, se(p00), se(p11), trials)


def pairwise_trial(n: int, bit: int, seed: int) -> TrialRecord:
    """Single attack trial with explicit local measurement records."""
    rng = np.random.default_rng(seed)
    labels = labels_with_parity(n, bit)
    label = labels[rng.integers(len(labels))]
    alice = tuple(int(b) for b in rng.integers(0, 2, n))
    bob = tuple(a ^ (p >> 1) for a, p in zip(alice, label.pairs))
    decoded = sum(a ^ b for a, b in zip(alice, bob)) & 1
    return TrialRecord(bit, label, alice, bob, decoded)


# ---------------------------------------------------------------------------
# Two-step LOCC measurement for the tau pair

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _bloch_proj(cx: float, cz: float, sign: int) -> np.ndarray:
    return 0.5 * (np.eye(2, dtype=complex) + sign * (cx * _SX + cz * _SZ))


def tau_unlock_povm() -> tuple[np.ndarray, np.ndarray]:
    """The adaptive local POVM: Alice measures along (-x+z)/sqrt(2), Bob refines."""
    inv_r2 = 1.0 / np.sqrt(2.0)
    cos_a = (1 + inv_r2) / np.sqrt(3.0)
    sin_a = (1 - inv_r2) / np.sqrt(3.0)
    eta_p = _bloch_proj(-inv_r2, inv_r2, +1)
    eta_m = _bloch_proj(-inv_r2, inv_r2, -1)
    eta_pp = _bloch_proj(cos_a, sin_a, +1)
    eta_mp = _bloch_proj(sin_a, cos_a, +1)
    m0 = np.kron(eta_p, eta_pp) + np.kron(eta_m, eta_mp)
    m1 = np.eye(4, dtype=complex) - m0
    return m0, m1


def tau_protocol_exact(symmetrized: bool = False) -> CondProbs:
    m0, m1 = tau_unlock_povm()
    if symmetrized:
        m0, m1 = pair_symmetrizer(m0), pair_symmetrizer(m1)
    t0, t1 = tau_state(0).mat, tau_state(1).mat
    p00 = float(np.real(np.trace(m0 @ t0)))
    p11 = float(np.real(np.trace(m1 @ t1)))
    return CondProbs(p00, p11)


def _tau_components(bit: int) -> list[tuple[np.ndarray, np.ndarray]]:
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
    zero = np.array([1, 0], dtype=complex)
    one = np.array([0, 1], dtype=complex)
    if bit == 0:
        return [(plus, zero), (zero, plus)]
    return [(minus, minus), (one, one)]


def tau_protocol_mc(trials: int, seed: int) -> McCondProbs:
    """Sample the adaptive measurement on pure components of each tau state."""
    inv_r2 = 1.0 / np.sqrt(2.0)
    cos_a = (1 + inv_r2) / np.sqrt(3.0)
    sin_a = (1 - inv_r2) / np.sqrt(3.0)
    eta_p = _bloch_proj(-inv_r2, inv_r2, +1)
    eta_pp = _bloch_proj(cos_a, sin_a, +1)
    eta_mp = _bloch_proj(sin_a, cos_a, +1)
    hits = {0: 0, 1: 0}
    n_blocks = (trials + MC_BLOCK - 1) // MC_BLOCK
    for bit in (0, 1):
        comps = _tau_components(bit)
        for block in range(n_blocks):
            size = min(MC_BLOCK, trials - block * MC_BLOCK)
            rng = _block_rng(seed, bit, block)
            which = rng.integers(0, 2, size)
            u = rng.random(size)
            v = rng.random(size)
            for comp_idx, (va, vb) in enumerate(comps):
                sel = which == comp_idx
                if not np.any(sel):
                    continue
                pa = float(np.real(va.conj() @ eta_p @ va))
                alice_plus = u[sel] < pa
                pb_plus = float(np.real(vb.conj() @ eta_pp @ vb))
                pb_minus = float(np.real(vb.conj() @ eta_mp @ vb))
                guess0 = np.where(alice_plus, v[sel] < pb_plus, v[sel] < pb_minus)
                hits[bit] += int(np.count_nonzero(guess0 == (bit == 0)))
    p00 = hits[0] / trials
    p11 = hits[1] / trials
    se = lambda p: float(np.sqrt(max(p * (1 - p), 1e-300) / trials))
    return McCondProbs(p00, p11, se(p00), se(p11), trials)


# ---------------------------------------------------------------------------
# State preparation


def prepare_rho0(n: int, seed: int, steps: int | None = None):
    """Sampled bilateral Clifford circuit whose ensemble average is the even state.

    Returns (circuit, info).  Applying the circuit to each side of n shared
    |00> pairs, averaged over samples, yields the even hiding state.
    """
    if steps is None:
        steps = clifford.walk_length_policy(n, 0.01)
    element = clifford.random_walk_sample(n, steps, seed)
    circuit = clifford.synthesize_circuit(element)
    info = {"n": n, "seed": seed, "steps": steps, "gates": len(circuit)}
    return circuit, info


def _rho0_label(m: int, rng: np.random.Generator) -> list[int]:
    labels = labels_with_parity(m, 0)
    return list(labels[rng.integers(len(labels))].pairs)


def _rho1_label(m: int, rng: np.random.Generator) -> list[int]:
    if m == 1:
        return [3]
    p = float(Fraction(2 ** (m - 1) + 1, 2 * (2**m - 1)))
    if rng.random() < p:
        return _rho0_label(m - 1, rng) + [3]
    return _rho1_label(m - 1, rng) + _rho0_label(1, rng)


def prepare_rho1_sample(n: int, seed) -> BellLabel:
    """Sample a Bell label of the odd hiding state using one singlet resource.

    The recursion consumes exactly one singlet: either it is placed on the last
    pair directly, or it is carried into the smaller odd-state sample.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    label = BellLabel(n, tuple(_rho1_label(n, rng)))
    if label.parity() != 1:
        raise AssertionError("sampled label has even singlet parity")
    return label
