"""Evaluation mathematics: relative error of counts and PMI error statistics.

All reductions accumulate through math.fsum, which returns the correctly
rounded sum of its inputs.  That makes every metric invariant under key
enumeration order and under any partitioning of the keys across workers.

PMI is taken in the natural log.  A different log base would rescale exact
and estimated PMI alike, so cross-sketch RMSE comparisons only change by a
constant factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .corpus import split_bigram_key
from .oracle import ExactCountTable
from .sketch import Sketch


@dataclass(frozen=True)
class MetricRow:
    """One evaluated (sketch, storage budget) cell of an experiment."""

    sketch_label: str
    storage_bytes: int
    are: float
    pmi_rmse: float
    depth: int
    width: int
    cell_bits: int
    base: float
    pmi_skipped_pairs: int

    def __post_init__(self):
        for name in ("are", "pmi_rmse"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class PmiHistogram:
    label: str
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    underflow: int
    overflow: int

    def __post_init__(self):
        if len(self.counts) != len(self.bin_edges) - 1:
            raise ValueError("need exactly one count per bin")
        if any(a >= b for a, b in zip(self.bin_edges, self.bin_edges[1:])):
            raise ValueError("bin edges must be strictly ascending")

    @property
    def total(self) -> int:
        return sum(self.counts) + self.underflow + self.overflow


class PmiComparison(NamedTuple):
    rmse: float
    compared_pairs: int
    skipped_pairs: int


def average_relative_error(
    exact: ExactCountTable, estimate_of: Callable[[bytes], float]
) -> float:
    """Mean over distinct keys of |estimate - exact| / exact, uniform weight."""
    if exact.distinct == 0:
        raise ValueError("cannot compute ARE over an empty count table")
    terms = (
        abs(estimate_of(key) - count) / count for key, count in exact.counts.items()
    )
    return math.fsum(terms) / exact.distinct


def pmi(
    bigram_count: float,
    left_count: float,
    right_count: float,
    total_bigrams: int,
    total_unigrams: int,
) -> float:
    """ln of p(left,right) / (p(left) p(right)).

    The pair probability is taken over total bigram occurrences and the
    single-word probabilities over total unigram occurrences.  Any
    non-positive count or total makes the value undefined and raises;
    callers decide whether to skip the pair.
    """
    if bigram_count <= 0 or left_count <= 0 or right_count <= 0:
        raise ValueError("pmi is undefined for non-positive counts")
    if total_bigrams <= 0 or total_unigrams <= 0:
        raise ValueError("pmi is undefined for non-positive totals")
    p_pair = bigram_count / total_bigrams
    p_left = left_count / total_unigrams
    p_right = right_count / total_unigrams
    return math.log(p_pair / (p_left * p_right))


def exact_bigram_pmi(exact: ExactCountTable, key: bytes) -> float:
    """PMI of one bigram key from exact counts."""
    left, right = split_bigram_key(key)
    return pmi(
        exact.counts[key],
        exact.counts[left],
        exact.counts[right],
        exact.total_bigrams,
        exact.total_unigrams,
    )


def sketch_bigram_pmis(
    exact: ExactCountTable, sk: Sketch
) -> tuple[dict[bytes, float], int]:
    """Estimated PMI per exact bigram key, and the count of undefined pairs.

    The sketch supplies the pair and both constituent word counts; the
    totals always come from the exact table.  Pairs where any estimate is
    zero have no defined PMI and are skipped, not clamped.
    """
    unigram_cache: dict[bytes, float] = {}
    values: dict[bytes, float] = {}
    skipped = 0
    for key in exact.bigram_keys():
        left, right = split_bigram_key(key)
        pair_est = sk.query(key)
        left_est = unigram_cache.get(left)
        if left_est is None:
            left_est = unigram_cache[left] = sk.query(left)
        right_est = unigram_cache.get(right)
        if right_est is None:
            right_est = unigram_cache[right] = sk.query(right)
        if pair_est <= 0 or left_est <= 0 or right_est <= 0:
            skipped += 1
            continue
        values[key] = pmi(
            pair_est, left_est, right_est, exact.total_bigrams, exact.total_unigrams
        )
    return values, skipped


def pmi_rmse(exact: ExactCountTable, sk: Sketch) -> PmiComparison:
    """RMSE between sketch-estimated and exact PMI over all exact bigrams."""
    if exact.total_bigrams == 0:
        raise ValueError("cannot compute PMI RMSE without bigrams")
    estimated, skipped = sketch_bigram_pmis(exact, sk)
    squares = (
        (value - exact_bigram_pmi(exact, key)) ** 2 for key, value in estimated.items()
    )
    total = math.fsum(squares)
    if not estimated:
        return PmiComparison(0.0, 0, skipped)
    return PmiComparison(math.sqrt(total / len(estimated)), len(estimated), skipped)


def pmi_histogram(
    pmis: Sequence[float] | Iterable[float],
    bin_count: int,
    value_range: tuple[float, float],
    label: str = "",
) -> PmiHistogram:
    """Equal-width histogram; out-of-range values land in under/overflow."""
    lo, hi = value_range
    if bin_count < 1:
        raise ValueError(f"bin_count must be >= 1, got {bin_count}")
    if not lo < hi:
        raise ValueError(f"histogram range must satisfy lo < hi, got [{lo}, {hi}]")
    values = np.asarray(list(pmis), dtype=np.float64)
    counts, edges = np.histogram(values, bins=bin_count, range=(lo, hi))
    underflow = int((values < lo).sum())
    overflow = int((values > hi).sum())
    return PmiHistogram(
        label=label,
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
        underflow=underflow,
        overflow=overflow,
    )
