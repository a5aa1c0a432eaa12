#!/usr/bin/env python3
"""Sweep the three sketch variants over storage budgets on a Zipfian stream.

Reproduces the count-error and PMI-error curves on a synthetic corpus:
ARE and PMI RMSE per (variant, budget), with PMI histograms recorded at the
budget closest to the perfect-storage size.  Defaults match the evaluation
setup (50k-word vocabulary, exponent 1.1, 500k tokens, depth 2); trim
--length for a quick look.

    python scripts/run_zipf_sweep.py --out-dir results/
    python scripts/run_zipf_sweep.py --length 50000 --seed 7 --out-dir /tmp/r
"""

import argparse
import sys
import time
from pathlib import Path

from sketchbench.corpus import ZipfSpec
from sketchbench.harness import ExperimentSpec, emit_csv, run_experiment


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--vocab", type=int, default=50_000)
    parser.add_argument("--exponent", type=float, default=1.1)
    parser.add_argument("--length", type=int, default=500_000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--depth", type=int, default=2)
    parser.add_argument(
        "--budgets",
        default=None,
        help="comma-separated byte budgets; default brackets perfect storage /16..x16",
    )
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    budgets = None
    if args.budgets:
        budgets = tuple(int(b) for b in args.budgets.split(",") if b)
    spec = ExperimentSpec(
        source=ZipfSpec(args.vocab, args.exponent, args.length, args.seed),
        depth=args.depth,
        budgets=budgets,
        seed=args.seed,
    )
    args.out_dir.mkdir(parents=True, exist_ok=True)
    metrics_path = args.out_dir / "metrics.csv"
    hist_path = args.out_dir / "pmi_histograms.csv"

    started = time.perf_counter()
    report = run_experiment(spec)
    emit_csv(report, metrics_path, hist_path)
    elapsed = time.perf_counter() - started

    perfect = report.perfect_storage_bytes
    print(f"perfect storage: {perfect} bytes ({perfect // 4} distinct keys)")
    print(f"histograms recorded at {report.hist_budget} bytes")
    print(f"{'variant':>10} {'budget':>10} {'xperfect':>9} {'are':>9} {'pmi_rmse':>9}")
    for row in report.rows:
        print(
            f"{row.sketch_label:>10} {row.storage_bytes:>10} "
            f"{row.storage_bytes / perfect:>9.3f} {row.are:>9.4f} "
            f"{row.pmi_rmse:>9.4f}"
        )
    print(f"wrote {metrics_path} and {hist_path} in {elapsed:.0f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
