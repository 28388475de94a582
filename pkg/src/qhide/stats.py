"""Small statistical helpers for the Monte Carlo tests."""

from __future__ import annotations

from collections import Counter

import numpy as np
from scipy.stats import chi2


def chi_square_uniform(counts) -> tuple[float, float]:
    """Chi-square statistic and p-value against a uniform distribution over
    the given category counts."""
    counts = np.asarray(counts, dtype=float)
    if counts.size < 2:
        raise ValueError("need at least two categories")
    expected = counts.sum() / counts.size
    if expected < 5.0:
        raise ValueError("too few samples per category for a chi-square test")
    stat = float(((counts - expected) ** 2 / expected).sum())
    return stat, float(chi2.sf(stat, counts.size - 1))


def category_counts(samples, categories) -> np.ndarray:
    """Counts of each expected category; raises if a sample falls outside."""
    tally = Counter(samples)
    unknown = set(tally) - set(categories)
    if unknown:
        raise ValueError(f"samples outside the expected categories: {unknown}")
    return np.array([tally[c] for c in categories], dtype=np.int64)


def wilson_interval(successes: int, trials: int, z: float = 3.0) -> tuple[float, float]:
    """Wilson score interval for a binomial rate; z defaults to three sigma."""
    if trials <= 0:
        raise ValueError("need at least one trial")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * np.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return center - half, center + half
