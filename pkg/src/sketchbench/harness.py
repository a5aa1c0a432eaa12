"""Experiment runner: sweep sketch variants over storage budgets on one stream.

One pass over the source builds the exact count table; every (variant,
budget) cell then gets a fresh sketch fed the same buffered event stream,
and is scored by count ARE and PMI RMSE against the exact table.  The
stream and the exact table must fit in memory, which holds comfortably at
the few-hundred-thousand-distinct-keys scale this harness targets.

Everything is deterministic: the stream comes from the master seed, and
each sketch's seed is derived from (master seed, variant, budget), so a
rerun with the same spec produces byte-identical CSVs.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .corpus import ZipfSpec, corpus_events
from .counters import CounterSemantics, Mode
from .metrics import (
    MetricRow,
    PmiHistogram,
    average_relative_error,
    exact_bigram_pmi,
    pmi_histogram,
    pmi_rmse,
    sketch_bigram_pmis,
)
from .oracle import ExactCountTable, count_exact, perfect_storage_bytes
from .sketch import Sketch, SketchConfig, digest64, width_for_budget

VARIANTS: dict[str, CounterSemantics] = {
    "CMS-CU": CounterSemantics(Mode.LINEAR, 0.0, 32),
    "CMLS16-CU": CounterSemantics(Mode.LOGARITHMIC, 1.00025, 16),
    "CMLS8-CU": CounterSemantics(Mode.LOGARITHMIC, 1.08, 8),
}

DEFAULT_VARIANTS = ("CMS-CU", "CMLS16-CU", "CMLS8-CU")
DEFAULT_HIST_BINS = 100
DEFAULT_HIST_RANGE = (-5.0, 15.0)

METRICS_HEADER = [
    "variant", "storage_bytes", "depth", "width", "cell_bits", "base",
    "are", "pmi_rmse", "pmi_skipped_pairs", "perfect_storage_bytes",
]
HIST_HEADER = ["series", "bin_lo", "bin_hi", "count"]


@dataclass(frozen=True)
class ExperimentSpec:
    """Full parameterization of one sweep.

    ``budgets`` is the list of cell-storage byte budgets to sweep; leaving
    it None selects a geometric grid from perfect/16 to perfect*16 in x2
    steps around the perfect-storage size of the stream.  ``hist_budget``
    picks the sweep budget at which PMI histograms are recorded and
    defaults to the budget closest to perfect storage.
    """

    source: str | Path | ZipfSpec
    depth: int = 2
    budgets: tuple[int, ...] | None = None
    variants: tuple[str, ...] = DEFAULT_VARIANTS
    seed: int = 1
    hist_budget: int | None = None
    hist_bins: int = DEFAULT_HIST_BINS
    hist_range: tuple[float, float] = DEFAULT_HIST_RANGE
    metrics_out: str | Path | None = None
    hist_out: str | Path | None = None

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.budgets is not None and len(self.budgets) == 0:
            raise ValueError("budgets must be non-empty when given")
        if not self.variants:
            raise ValueError("at least one variant is required")
        for name in self.variants:
            if name not in VARIANTS:
                raise ValueError(
                    f"unknown variant {name!r}; choose from {sorted(VARIANTS)}"
                )


@dataclass
class ExperimentReport:
    rows: list[MetricRow]
    histograms: list[PmiHistogram]
    perfect_storage_bytes: int
    hist_budget: int
    exact: ExactCountTable = field(repr=False)


def default_budgets(perfect_bytes: int) -> tuple[int, ...]:
    """Geometric sweep bracketing the perfect-storage size: /16 .. x16."""
    return tuple(max(1, perfect_bytes * 2**i // 16) for i in range(9))


def derive_sketch_seed(master_seed: int, variant: str, budget: int) -> int:
    """Independent 64-bit sketch seed per (master seed, variant, budget)."""
    tag = f"{master_seed}|{variant}|{budget}".encode()
    return int.from_bytes(hashlib.blake2b(tag, digest_size=8).digest(), "little")


def build_sketch(
    variant: str, budget: int, depth: int, master_seed: int
) -> Sketch:
    sem = VARIANTS[variant]
    width = width_for_budget(budget, depth, sem.cell_bits)
    config = SketchConfig(
        semantics=sem,
        depth=depth,
        width=width,
        seed=derive_sketch_seed(master_seed, variant, budget),
    )
    return Sketch(config)


def run_experiment(spec: ExperimentSpec) -> ExperimentReport:
    events = list(corpus_events(spec.source))
    if not events:
        raise ValueError("source produced an empty event stream")
    exact = count_exact(events)
    perfect = perfect_storage_bytes(exact.distinct)

    budgets = tuple(sorted(spec.budgets)) if spec.budgets else default_budgets(perfect)
    hist_budget = spec.hist_budget
    if hist_budget is None:
        hist_budget = min(budgets, key=lambda b: (abs(b - perfect), b))
    elif hist_budget not in budgets:
        raise ValueError(f"hist budget {hist_budget} is not one of the swept budgets")

    # Hash each distinct key once; replays of the stream reuse the digests.
    digest_of = {key: digest64(key) for key in exact.counts}
    event_digests = [digest_of[event.key] for event in events]

    exact_pmis = [exact_bigram_pmi(exact, key) for key in exact.bigram_keys()]
    histograms = [
        pmi_histogram(exact_pmis, spec.hist_bins, spec.hist_range, label="exact")
    ]

    rows = []
    for variant in spec.variants:
        for budget in budgets:
            sk = build_sketch(variant, budget, spec.depth, spec.seed)
            feed = sk.update_prehashed
            for digest in event_digests:
                feed(digest)
            are = average_relative_error(exact, sk.query)
            comparison = pmi_rmse(exact, sk)
            sem = sk.config.semantics
            rows.append(
                MetricRow(
                    sketch_label=variant,
                    storage_bytes=sk.config.storage_bytes,
                    are=are,
                    pmi_rmse=comparison.rmse,
                    depth=sk.config.depth,
                    width=sk.config.width,
                    cell_bits=sem.cell_bits,
                    base=sem.base,
                    pmi_skipped_pairs=comparison.skipped_pairs,
                )
            )
            if budget == hist_budget:
                estimated, _ = sketch_bigram_pmis(exact, sk)
                histograms.append(
                    pmi_histogram(
                        estimated.values(), spec.hist_bins, spec.hist_range,
                        label=variant,
                    )
                )

    return ExperimentReport(
        rows=rows,
        histograms=histograms,
        perfect_storage_bytes=perfect,
        hist_budget=hist_budget,
        exact=exact,
    )


def _atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def render_metrics_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(METRICS_HEADER)
    for row in report.rows:
        writer.writerow([
            row.sketch_label, row.storage_bytes, row.depth, row.width,
            row.cell_bits, row.base, row.are, row.pmi_rmse,
            row.pmi_skipped_pairs, report.perfect_storage_bytes,
        ])
    return buf.getvalue()


def render_histogram_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(HIST_HEADER)
    for hist in report.histograms:
        for lo, hi, count in zip(hist.bin_edges, hist.bin_edges[1:], hist.counts):
            writer.writerow([hist.label, lo, hi, count])
    return buf.getvalue()


def emit_csv(
    report: ExperimentReport,
    metrics_path: str | Path,
    hist_path: str | Path,
) -> None:
    """Write both CSVs atomically (temp file in place, then rename)."""
    _atomic_write_text(metrics_path, render_metrics_csv(report))
    _atomic_write_text(hist_path, render_histogram_csv(report))
