"""Command-line interface.

    sketchbench run --zipf 50000,1.1,500000 --seed 7 \
        --metrics-out metrics.csv --hist-out hist.csv
    sketchbench run --input corpus_dir/ --budgets 32768,65536 ...
    sketchbench snapshot --save sk.cmls --zipf 1000,1.1,10000 \
        --variant CMLS8-CU --budget 4096
    sketchbench snapshot --load sk.cmls --query the --query-bigram "of the"

Exits 0 on success, 1 with a one-line diagnostic on stderr otherwise.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus import ZipfSpec, bigram_key, corpus_events, tokenize, unigram_key
from .counters import Mode
from .harness import (
    DEFAULT_HIST_BINS,
    DEFAULT_HIST_RANGE,
    DEFAULT_VARIANTS,
    VARIANTS,
    ExperimentSpec,
    build_sketch,
    emit_csv,
    run_experiment,
)
from .sketch import load_snapshot, save_snapshot


def _parse_zipf(text: str, seed: int) -> ZipfSpec:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"--zipf expects vocab,s,n (got {text!r})")
    return ZipfSpec(
        vocab_size=int(parts[0]),
        exponent=float(parts[1]),
        length=int(parts[2]),
        seed=seed,
    )


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part)


def _parse_range(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected lo,hi (got {text!r})")
    return float(parts[0]), float(parts[1])


def _add_source_args(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", metavar="PATH", help="UTF-8 text file or directory")
    source.add_argument("--zipf", metavar="VOCAB,S,N", help="synthetic Zipfian stream")


def _resolve_source(args: argparse.Namespace):
    if args.zipf is not None:
        return _parse_zipf(args.zipf, args.seed)
    return Path(args.input)


def _cmd_run(args: argparse.Namespace) -> int:
    spec = ExperimentSpec(
        source=_resolve_source(args),
        depth=args.depth,
        budgets=_parse_int_list(args.budgets) if args.budgets else None,
        variants=tuple(args.variants.split(",")),
        seed=args.seed,
        hist_budget=args.hist_budget,
        hist_bins=args.hist_bins,
        hist_range=_parse_range(args.hist_range),
        metrics_out=args.metrics_out,
        hist_out=args.hist_out,
    )
    report = run_experiment(spec)
    emit_csv(report, spec.metrics_out, spec.hist_out)
    print(
        f"wrote {len(report.rows)} metric rows to {spec.metrics_out} and "
        f"{len(report.histograms)} histogram series to {spec.hist_out} "
        f"(perfect storage: {report.perfect_storage_bytes} bytes)"
    )
    return 0


def _cmd_snapshot(args: argparse.Namespace) -> int:
    if args.save is not None:
        sk = build_sketch(args.variant, args.budget, args.depth, args.seed)
        for event in corpus_events(_resolve_source(args)):
            sk.update(event.key)
        save_snapshot(sk, args.save)
        print(f"saved {_describe(sk)} to {args.save}")
        return 0

    sk = load_snapshot(args.load)
    print(_describe(sk))
    for token in args.query or ():
        key = unigram_key(_single_token(token))
        print(f"{token}\t{sk.query(key)}")
    for pair in args.query_bigram or ():
        tokens = tokenize(pair)
        if len(tokens) != 2:
            raise ValueError(f"--query-bigram expects two tokens, got {pair!r}")
        print(f"{tokens[0]} {tokens[1]}\t{sk.query(bigram_key(*tokens))}")
    return 0


def _single_token(text: str) -> str:
    tokens = tokenize(text)
    if len(tokens) != 1:
        raise ValueError(f"--query expects one token, got {text!r}")
    return tokens[0]


def _describe(sk) -> str:
    cfg = sk.config
    sem = cfg.semantics
    mode = "linear" if sem.mode == Mode.LINEAR else f"log base {sem.base}"
    return (
        f"sketch {mode}, depth {cfg.depth}, width {cfg.width}, "
        f"{sem.cell_bits}-bit cells, {cfg.storage_bytes} bytes, "
        f"seed {cfg.seed}, {sk.update_count} accepted updates"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sketchbench",
        description="count-min sketch variants benchmarked on n-gram streams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="sweep variants over storage budgets")
    _add_source_args(run)
    run.add_argument("--depth", type=int, default=2)
    run.add_argument("--budgets", metavar="B1,B2,...", help="storage budgets in bytes")
    run.add_argument("--variants", default=",".join(DEFAULT_VARIANTS),
                     help=f"comma list from {sorted(VARIANTS)}")
    run.add_argument("--seed", type=int, default=1)
    run.add_argument("--metrics-out", required=True, metavar="CSV")
    run.add_argument("--hist-out", required=True, metavar="CSV")
    run.add_argument("--hist-budget", type=int, default=None, metavar="BYTES")
    run.add_argument("--hist-bins", type=int, default=DEFAULT_HIST_BINS)
    run.add_argument("--hist-range", default=f"{DEFAULT_HIST_RANGE[0]},{DEFAULT_HIST_RANGE[1]}",
                     metavar="LO,HI")
    run.set_defaults(func=_cmd_run)

    snap = sub.add_parser("snapshot", help="save or load a sketch snapshot")
    action = snap.add_mutually_exclusive_group(required=True)
    action.add_argument("--save", metavar="PATH", help="build a sketch and save it")
    action.add_argument("--load", metavar="PATH", help="load and describe a snapshot")
    snap.add_argument("--input", metavar="PATH")
    snap.add_argument("--zipf", metavar="VOCAB,S,N")
    snap.add_argument("--variant", default="CMLS8-CU", choices=sorted(VARIANTS))
    snap.add_argument("--budget", type=int, default=None, metavar="BYTES")
    snap.add_argument("--depth", type=int, default=2)
    snap.add_argument("--seed", type=int, default=1)
    snap.add_argument("--query", action="append", metavar="TOKEN")
    snap.add_argument("--query-bigram", action="append", metavar="'T1 T2'")
    snap.set_defaults(func=_cmd_snapshot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "snapshot" and args.save is not None:
        if args.input is None and args.zipf is None:
            parser.error("snapshot --save needs --input or --zipf")
        if args.budget is None:
            parser.error("snapshot --save needs --budget")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"sketchbench: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
