"""Count-min sketches with conservative update, in linear and logarithmic
counter flavors, plus the n-gram evaluation harness around them."""

from .counters import CounterSemantics, Mode, cell_value, increase_decision, point_value
from .corpus import (
    NgramEvent,
    NgramKind,
    ZipfSpec,
    bigram_key,
    ngram_stream,
    tokenize,
    unigram_key,
    zipf_generate,
)
from .harness import ExperimentReport, ExperimentSpec, VARIANTS, emit_csv, run_experiment
from .metrics import (
    MetricRow,
    PmiHistogram,
    average_relative_error,
    pmi,
    pmi_histogram,
    pmi_rmse,
)
from .oracle import ExactCountTable, count_exact, perfect_storage_bytes
from .rng import Xoroshiro128Plus
from .sketch import (
    Sketch,
    SketchConfig,
    SnapshotError,
    digest64,
    row_index,
    width_for_budget,
)

__all__ = [
    "CounterSemantics",
    "Mode",
    "cell_value",
    "increase_decision",
    "point_value",
    "NgramEvent",
    "NgramKind",
    "ZipfSpec",
    "bigram_key",
    "ngram_stream",
    "tokenize",
    "unigram_key",
    "zipf_generate",
    "ExperimentReport",
    "ExperimentSpec",
    "VARIANTS",
    "emit_csv",
    "run_experiment",
    "MetricRow",
    "PmiHistogram",
    "average_relative_error",
    "pmi",
    "pmi_histogram",
    "pmi_rmse",
    "ExactCountTable",
    "count_exact",
    "perfect_storage_bytes",
    "Xoroshiro128Plus",
    "Sketch",
    "SketchConfig",
    "SnapshotError",
    "digest64",
    "row_index",
    "width_for_budget",
]

__version__ = "0.1.0"
