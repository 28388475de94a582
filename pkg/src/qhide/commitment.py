"""Bit commitment on top of the hiding states.

Commit: the committer samples a Bell-label state whose singlet-count parity is
the committed bit and distributes one qubit of each pair to each receiver.
Open: the committer supplies n + r nominally-singlet pairs; the receivers run
r rounds of random bilateral parity checks over all supplied pairs, then use
the surviving n pairs to teleport one receiver's commit qubits to the other,
who reads the label parity.

Everything runs in the Bell-label picture: teleporting through a channel pair
whose label is offset from the singlet XORs that offset onto the data label.
Check rounds draw a uniformly nonzero Pauli letter string over the supplied
pairs, so any nonzero offset fails an independent round with probability one
half (exactly (4^m/2)/(4^m - 1)).  Product-state inputs to the hashing test
collapse, so that path runs on the stabilizer simulator instead.

A committer may also send a superposition over a parity class instead of a
sample; that variant neither helps the receivers nor the committer and is not
modeled here.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .pauli import BellLabel, PauliString, labels_with_parity, pauli_mul
from .stabilizer import StabilizerState

MC_BLOCK = 8192
MAX_TOTAL_PAIRS = 31  # keeps encoded labels and check strings inside int64
_VALUE_LETTER = {1: "Z", 2: "X", 3: "Y"}


@dataclass(frozen=True)
class CheatModel:
    variant: str  # "honest" | "wrong_parity" | "nonsinglet"
    alpha: float = 1.0

    def __post_init__(self):
        if self.variant not in ("honest", "wrong_parity", "nonsinglet"):
            raise ValueError(f"unknown cheat variant {self.variant!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("fidelity must lie in [0, 1]")
        if self.variant == "honest" and self.alpha != 1.0:
            raise ValueError("honest play has fidelity 1")

    @classmethod
    def parse(cls, text: str) -> "CheatModel":
        if text == "honest":
            return cls("honest")
        if text == "parity":
            return cls("wrong_parity", alpha=0.0)
        if text.startswith("nonsinglet:"):
            return cls("nonsinglet", alpha=float(text.split(":", 1)[1]))
        raise ValueError(f"unknown cheat spec {text!r}")


def _encode(pairs) -> int:
    return sum(int(v) << (2 * i) for i, v in enumerate(pairs))


def _lo_mask(m: int) -> int:
    return sum(1 << (2 * i) for i in range(m))


def _form_parity(c: int, d: int, lo: int) -> int:
    """Round-failure indicator: parity of sum(c_x & d_phase ^ c_z & d_amp)."""
    bits = ((c >> 1) & d & lo) ^ (c & (d >> 1) & lo)
    return bits.bit_count() & 1


def _singlet_parity(enc: int, lo: int) -> int:
    return (enc & (enc >> 1) & lo).bit_count() & 1


def round_pass_probability(offsets) -> Fraction:
    """Exact single-round pass chance for the given per-pair label offsets,
    by brute enumeration of every nonzero check string."""
    m = len(offsets)
    d = _encode(offsets)
    lo = _lo_mask(m)
    hits = sum(1 for c in range(1, 4**m) if _form_parity(c, d, lo) == 0)
    return Fraction(hits, 4**m - 1)


def round_pass_closed_form(m: int) -> Fraction:
    """Single-round pass chance for any nonzero offset string."""
    return Fraction(4**m // 2 - 1, 4**m - 1)


@dataclass(frozen=True)
class HashingResult:
    passed: bool
    rounds: tuple[tuple[str, bool], ...]  # (check string, round ok)


def _check_string_text(c: int, m: int) -> str:
    return "".join("IZXY"[(c >> (2 * i)) & 3] for i in range(m))


def hashing_test(pairs, r: int, rng) -> HashingResult:
    """r rounds of random bilateral parity checks.

    `pairs` is a BellLabel (or sequence of pair values 0..3) for the label
    picture, or a StabilizerState in block pair layout for states that are not
    Bell products.  Each round draws a uniformly nonzero letter string; true
    singlets match every check's expected eigenvalue.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    if r < 1:
        raise ValueError("need at least one check round")
    if isinstance(pairs, StabilizerState):
        m = pairs.n // 2
        if m > MAX_TOTAL_PAIRS:
            raise ValueError(f"hashing capped at {MAX_TOTAL_PAIRS} total pairs")
        if m < r:
            raise ValueError("fewer checkable pairs than rounds")
        rounds = []
        ok_all = True
        for _ in range(r):
            c = int(rng.integers(1, 4**m))
            obs = PauliString.identity(2 * m)
            expected = 1
            for i in range(m):
                v = (c >> (2 * i)) & 3
                if v == 0:
                    continue
                expected = -expected
                obs = pauli_mul(obs, PauliString.single(2 * m, i, _VALUE_LETTER[v]))[0]
                obs = pauli_mul(obs, PauliString.single(2 * m, m + i, _VALUE_LETTER[v]))[0]
            ok = pairs.measure(obs, rng) == expected
            ok_all = ok_all and ok
            rounds.append((_check_string_text(c, m), ok))
        return HashingResult(ok_all, tuple(rounds))

    values = pairs.pairs if isinstance(pairs, BellLabel) else tuple(pairs)
    m = len(values)
    if m > MAX_TOTAL_PAIRS:
        raise ValueError(f"hashing capped at {MAX_TOTAL_PAIRS} total pairs")
    if m < r:
        raise ValueError("fewer checkable pairs than rounds")
    d = _encode(values) ^ _lo_mask(m) * 0b11
    lo = _lo_mask(m)
    rounds = []
    ok_all = True
    for _ in range(r):
        c = int(rng.integers(1, 4**m))
        ok = _form_parity(c, d, lo) == 0
        ok_all = ok_all and ok
        rounds.append((_check_string_text(c, m), ok))
    return HashingResult(ok_all, tuple(rounds))


class CommitmentSession:
    """Single commit/open run with an ordered transcript.

    Phases move Init -> Committed -> Opened or Aborted only.
    """

    def __init__(self, n: int, r: int, seed: int):
        if n < 1 or r < 1:
            raise ValueError("both security parameters must be at least 1")
        self.n = n
        self.r = r
        self.phase = "Init"
        self.committed_bit: int | None = None
        self.committed_label: BellLabel | None = None
        self.transcript: list[tuple] = []
        self._rng = np.random.default_rng(np.random.SeedSequence((seed,)))

    def commit(self, bit: int) -> None:
        if self.phase != "Init":
            raise RuntimeError(f"cannot commit from phase {self.phase}")
        labels = labels_with_parity(self.n, bit)
        self.committed_bit = bit
        self.committed_label = labels[int(self._rng.integers(len(labels)))]
        self.phase = "Committed"
        self.transcript.append(("commit", bit, self.committed_label.to_text()))

    def open(self, cheat: CheatModel) -> dict:
        if self.phase != "Committed":
            raise RuntimeError(f"cannot open from phase {self.phase}")
        n, r = self.n, self.r
        m = n + r
        attempt_flip = False
        if cheat.variant == "wrong_parity":
            attempt_flip = True
        elif cheat.variant == "nonsinglet":
            attempt_flip = bool(self._rng.random() >= cheat.alpha)
        if attempt_flip:
            targets = labels_with_parity(n, 1 - self.committed_bit)
            target = targets[int(self._rng.integers(len(targets)))]
            data_offsets = tuple(a ^ b for a, b in zip(self.committed_label.pairs, target.pairs))
        else:
            data_offsets = (0,) * n
        supplied = tuple(3 ^ v for v in data_offsets) + (3,) * r
        self.transcript.append(("open_supply", "".join(str(v) for v in supplied)))
        result = hashing_test(supplied, r, self._rng)
        for text, ok in result.rounds:
            self.transcript.append(("hash_round", text, ok))
        if not result.passed:
            self.phase = "Aborted"
            self.transcript.append(("abort",))
            return {"passed": False, "decoded_bit": None, "flipped": False}
        decoded_pairs = tuple(
            k ^ d for k, d in zip(self.committed_label.pairs, data_offsets)
        )
        decoded = BellLabel(n, decoded_pairs)
        decoded_bit = decoded.parity()
        self.phase = "Opened"
        self.transcript.append(("teleport", decoded.to_text()))
        self.transcript.append(("decode", decoded_bit))
        return {
            "passed": True,
            "decoded_bit": decoded_bit,
            "flipped": decoded_bit != self.committed_bit,
        }


def run_session(n: int, r: int, bit: int, cheat: CheatModel, seed: int) -> tuple[list, dict]:
    """One full session; returns (transcript, verdict)."""
    session = CommitmentSession(n, r, seed)
    session.commit(bit)
    verdict = session.open(cheat)
    return session.transcript, verdict


@dataclass(frozen=True)
class CommitStats:
    pass_rate: float
    decode_accuracy: float | None  # among passing sessions; None if none passed
    flip_success_rate: float
    sessions: int

    def to_json_dict(self) -> dict:
        return {
            "pass_rate": self.pass_rate,
            "decode_accuracy": self.decode_accuracy,
            "flip_success_rate": self.flip_success_rate,
            "sessions": self.sessions,
        }


def _parity_int64(bits: np.ndarray) -> np.ndarray:
    out = bits.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        out ^= out >> shift
    return out & 1


def _sessions_block(
    n: int, r: int, bit: int, cheat: CheatModel, size: int, seed: int, block: int
) -> tuple[int, int, int]:
    rng = np.random.default_rng(np.random.SeedSequence((seed, block)))
    m = n + r
    own = np.array([_encode(lab.pairs) for lab in labels_with_parity(n, bit)], dtype=np.int64)
    other = np.array(
        [_encode(lab.pairs) for lab in labels_with_parity(n, 1 - bit)], dtype=np.int64
    )
    committed = own[rng.integers(0, own.size, size)]
    if cheat.variant == "honest":
        attempt = np.zeros(size, dtype=bool)
    elif cheat.variant == "wrong_parity":
        attempt = np.ones(size, dtype=bool)
    else:
        attempt = rng.random(size) >= cheat.alpha
    targets = other[rng.integers(0, other.size, size)]
    d_data = np.where(attempt, committed ^ targets, 0)
    lo = _lo_mask(m)
    checks = rng.integers(1, 4**m, size=(size, r), dtype=np.int64)
    fail_bits = ((checks >> 1) & d_data[:, None] & lo) ^ (
        checks & (d_data[:, None] >> 1) & lo
    )
    passed = ~np.any(_parity_int64(fail_bits), axis=1)
    decoded_parity = _parity_int64(
        (committed ^ d_data) & ((committed ^ d_data) >> 1) & _lo_mask(n)
    )
    correct = passed & (decoded_parity == bit)
    flipped = passed & (decoded_parity != bit)
    return int(passed.sum()), int(correct.sum()), int(flipped.sum())


def run_sessions(
    n: int, r: int, bit: int, cheat: CheatModel, sessions: int, seed: int, threads: int = 1
) -> CommitStats:
    """Aggregate statistics over many independent sessions (label fast path)."""
    if sessions < 1:
        raise ValueError("need at least one session")
    if n + r > MAX_TOTAL_PAIRS:
        raise ValueError(f"hashing capped at {MAX_TOTAL_PAIRS} total pairs")
    blocks = [
        (b, min(MC_BLOCK, sessions - b * MC_BLOCK))
        for b in range((sessions + MC_BLOCK - 1) // MC_BLOCK)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(lambda blk: _sessions_block(n, r, bit, cheat, blk[1], seed, blk[0]), blocks)
            )
    else:
        parts = [_sessions_block(n, r, bit, cheat, size, seed, b) for b, size in blocks]
    passed = sum(p[0] for p in parts)
    correct = sum(p[1] for p in parts)
    flipped = sum(p[2] for p in parts)
    return CommitStats(
        pass_rate=passed / sessions,
        decode_accuracy=(correct / passed) if passed else None,
        flip_success_rate=flipped / sessions,
        sessions=sessions,
    )
