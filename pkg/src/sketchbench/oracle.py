"""Exact ground-truth counting and the perfect-storage reference size."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .corpus import BIGRAM_SEP, NgramEvent, NgramKind, is_bigram_key

# One exact 32-bit counter per distinct element, keys excluded.
PERFECT_COUNTER_BYTES = 4


@dataclass
class ExactCountTable:
    counts: dict[bytes, int] = field(default_factory=dict)
    total_unigrams: int = 0
    total_bigrams: int = 0

    @property
    def distinct(self) -> int:
        return len(self.counts)

    def bigram_keys(self):
        return (k for k in self.counts if is_bigram_key(k))

    def unigram_keys(self):
        return (k for k in self.counts if not is_bigram_key(k))


def count_exact(events: Iterable[NgramEvent]) -> ExactCountTable:
    """Tally every event; order-invariant by construction."""
    counts: Counter[bytes] = Counter()
    total_unigrams = 0
    total_bigrams = 0
    for event in events:
        counts[event.key] += 1
        if event.kind is NgramKind.UNIGRAM:
            total_unigrams += 1
        else:
            total_bigrams += 1
    return ExactCountTable(dict(counts), total_unigrams, total_bigrams)


def perfect_storage_bytes(distinct: int) -> int:
    """Bytes needed to hold one exact counter per distinct element."""
    if distinct < 0:
        raise ValueError(f"distinct must be >= 0, got {distinct}")
    return distinct * PERFECT_COUNTER_BYTES


def dump_csv(table: ExactCountTable, path: str | Path) -> None:
    """Debug dump as key,kind,count rows; bigram separator shown as a space."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "kind", "count"])
        for key, count in table.counts.items():
            kind = "bigram" if is_bigram_key(key) else "unigram"
            writer.writerow([key.replace(BIGRAM_SEP, b" ").decode("utf-8"), kind, count])
