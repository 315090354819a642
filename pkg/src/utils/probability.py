"""Probability helpers: Noisy-OR combination and Shannon entropy."""

from typing import Iterable, Mapping, Sequence, Tuple

import numpy as np


def noisy_or(values: Iterable[float]) -> float:
    """1 - prod(1 - p); 0.0 for no inputs."""
    probs = np.fromiter(values, dtype=float)
    if probs.size == 0:
        return 0.0
    if np.any(probs < 0) or np.any(probs > 1):
        raise ValueError("Noisy-OR inputs must lie in [0, 1]")
    return float(1.0 - np.prod(1.0 - probs))


def entropy(counts: Sequence[int]) -> float:
    """Shannon entropy in bits of a count vector."""
    arr = np.asarray(counts, dtype=float)
    total = arr.sum()
    if total <= 0:
        return 0.0
    p = arr[arr > 0] / total
    return float(-(p * np.log2(p)).sum())


def information_gain(table: Mapping[str, Tuple[int, int]]) -> float:
    """Gain in bits of splitting a two-class population by the given value -> counts table."""
    if not table:
        return 0.0
    counts = np.array(list(table.values()), dtype=float)
    total = counts.sum()
    if total <= 0:
        return 0.0
    parent = entropy(counts.sum(axis=0))
    weighted = sum((row.sum() / total) * entropy(row) for row in counts)
    # Clamp float noise so that 0 <= gain <= parent holds exactly.
    return float(min(max(parent - weighted, 0.0), parent))
