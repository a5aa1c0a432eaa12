"""Experiment sweep wiring, CSV emission, and the command-line interface."""

import csv
import io
import math

import pytest

from sketchbench.cli import main
from sketchbench.corpus import ZipfSpec
from sketchbench.counters import Mode
from sketchbench.harness import (
    DEFAULT_VARIANTS,
    HIST_HEADER,
    METRICS_HEADER,
    VARIANTS,
    ExperimentSpec,
    build_sketch,
    default_budgets,
    derive_sketch_seed,
    emit_csv,
    render_histogram_csv,
    render_metrics_csv,
    run_experiment,
)
from sketchbench.oracle import PERFECT_COUNTER_BYTES

SMALL = ZipfSpec(vocab_size=30, exponent=1.1, length=400, seed=3)


@pytest.fixture(scope="module")
def small_report():
    return run_experiment(ExperimentSpec(source=SMALL, budgets=(256, 1024), seed=3))


class TestPresets:
    def test_variant_table(self):
        cms = VARIANTS["CMS-CU"]
        assert (cms.mode, cms.cell_bits) == (Mode.LINEAR, 32)
        cmls16 = VARIANTS["CMLS16-CU"]
        assert (cmls16.mode, cmls16.base, cmls16.cell_bits) == (
            Mode.LOGARITHMIC, 1.00025, 16,
        )
        cmls8 = VARIANTS["CMLS8-CU"]
        assert (cmls8.mode, cmls8.base, cmls8.cell_bits) == (
            Mode.LOGARITHMIC, 1.08, 8,
        )

    def test_default_variant_order(self):
        assert DEFAULT_VARIANTS == ("CMS-CU", "CMLS16-CU", "CMLS8-CU")

    def test_default_budgets_bracket_perfect_storage(self):
        budgets = default_budgets(1600)
        assert len(budgets) == 9
        assert budgets[0] == 100
        assert budgets[4] == 1600
        assert budgets[-1] == 25600
        ratios = [b / a for a, b in zip(budgets, budgets[1:])]
        assert all(r == 2 for r in ratios)


class TestSeedDerivation:
    def test_deterministic(self):
        assert derive_sketch_seed(1, "CMS-CU", 512) == derive_sketch_seed(
            1, "CMS-CU", 512
        )

    def test_sensitive_to_every_input(self):
        base = derive_sketch_seed(1, "CMS-CU", 512)
        assert derive_sketch_seed(2, "CMS-CU", 512) != base
        assert derive_sketch_seed(1, "CMLS8-CU", 512) != base
        assert derive_sketch_seed(1, "CMS-CU", 513) != base

    def test_build_sketch_wires_width_and_seed(self):
        sk = build_sketch("CMLS8-CU", 1024, 2, master_seed=9)
        assert sk.config.width == 512
        assert sk.config.depth == 2
        assert sk.config.semantics == VARIANTS["CMLS8-CU"]
        assert sk.config.seed == derive_sketch_seed(9, "CMLS8-CU", 1024)


class TestSpecValidation:
    def test_unknown_variant(self):
        with pytest.raises(ValueError, match="unknown variant"):
            ExperimentSpec(source=SMALL, variants=("CMS-CU", "nope"))

    def test_empty_budget_tuple(self):
        with pytest.raises(ValueError):
            ExperimentSpec(source=SMALL, budgets=())

    def test_bad_depth(self):
        with pytest.raises(ValueError):
            ExperimentSpec(source=SMALL, depth=0)

    def test_no_variants(self):
        with pytest.raises(ValueError):
            ExperimentSpec(source=SMALL, variants=())


class TestRunExperiment:
    def test_row_grid_and_order(self, small_report):
        labels = [(r.sketch_label, r.width) for r in small_report.rows]
        assert len(labels) == len(DEFAULT_VARIANTS) * 2
        # variants in listed order, budgets ascending within each variant
        assert [r.sketch_label for r in small_report.rows] == [
            "CMS-CU", "CMS-CU", "CMLS16-CU", "CMLS16-CU", "CMLS8-CU", "CMLS8-CU",
        ]
        cms_rows = small_report.rows[:2]
        assert cms_rows[0].storage_bytes < cms_rows[1].storage_bytes

    def test_row_fields_are_consistent(self, small_report):
        for row, budget in zip(small_report.rows, [256, 1024] * 3):
            sem = VARIANTS[row.sketch_label]
            assert row.depth == 2
            assert row.cell_bits == sem.cell_bits
            assert row.base == sem.base
            assert row.width == budget // (2 * sem.cell_bits // 8)
            assert row.storage_bytes == row.depth * row.width * (row.cell_bits // 8)
            assert row.storage_bytes <= budget

    def test_perfect_storage_matches_distinct_count(self, small_report):
        assert (
            small_report.perfect_storage_bytes
            == small_report.exact.distinct * PERFECT_COUNTER_BYTES
        )

    def test_histogram_series(self, small_report):
        assert [h.label for h in small_report.histograms] == [
            "exact", "CMS-CU", "CMLS16-CU", "CMLS8-CU",
        ]
        exact_hist = small_report.histograms[0]
        bigrams = sum(1 for _ in small_report.exact.bigram_keys())
        assert exact_hist.total == bigrams

    def test_default_hist_budget_hugs_perfect_storage(self, small_report):
        perfect = small_report.perfect_storage_bytes
        assert small_report.hist_budget == min(
            (256, 1024), key=lambda b: (abs(b - perfect), b)
        )

    def test_unsorted_budgets_are_swept_ascending(self):
        report = run_experiment(
            ExperimentSpec(source=SMALL, budgets=(1024, 256), seed=3)
        )
        widths = [r.storage_bytes for r in report.rows[:2]]
        assert widths[0] < widths[1]

    def test_hist_budget_must_be_swept(self):
        with pytest.raises(ValueError, match="hist budget"):
            run_experiment(
                ExperimentSpec(source=SMALL, budgets=(256, 1024), hist_budget=512)
            )

    def test_empty_stream_is_an_error(self):
        with pytest.raises(ValueError, match="empty event stream"):
            run_experiment(
                ExperimentSpec(source=ZipfSpec(10, 1.1, 0, seed=1), budgets=(64,))
            )

    def test_generous_budget_drives_linear_error_to_zero(self):
        report = run_experiment(
            ExperimentSpec(
                source=ZipfSpec(10, 1.1, 120, seed=4),
                budgets=(1 << 16,),
                variants=("CMS-CU",),
                seed=4,
            )
        )
        row = report.rows[0]
        assert row.are == 0.0
        assert row.pmi_rmse == 0.0
        assert row.pmi_skipped_pairs == 0

    def test_reruns_are_identical(self):
        spec = ExperimentSpec(source=SMALL, budgets=(256, 512), seed=11)
        a = run_experiment(spec)
        b = run_experiment(spec)
        assert a.rows == b.rows
        assert a.histograms == b.histograms


class TestCsv:
    def test_metrics_csv_parses_back(self, small_report):
        text = render_metrics_csv(small_report)
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == METRICS_HEADER
        assert len(rows) == 1 + len(small_report.rows)
        for parsed, row in zip(rows[1:], small_report.rows):
            assert parsed[0] == row.sketch_label
            assert int(parsed[1]) == row.storage_bytes
            assert int(parsed[2]) == row.depth
            assert int(parsed[3]) == row.width
            assert int(parsed[4]) == row.cell_bits
            assert float(parsed[5]) == row.base
            assert float(parsed[6]) == row.are
            assert float(parsed[7]) == row.pmi_rmse
            assert int(parsed[8]) == row.pmi_skipped_pairs
            assert int(parsed[9]) == small_report.perfect_storage_bytes

    def test_histogram_csv_parses_back(self, small_report):
        text = render_histogram_csv(small_report)
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == HIST_HEADER
        per_series = {h.label: h for h in small_report.histograms}
        body = rows[1:]
        assert len(body) == sum(len(h.counts) for h in per_series.values())
        for label, hist in per_series.items():
            mine = [r for r in body if r[0] == label]
            assert [int(r[3]) for r in mine] == list(hist.counts)
            assert [float(r[1]) for r in mine] == list(hist.bin_edges[:-1])
            assert [float(r[2]) for r in mine] == list(hist.bin_edges[1:])

    def test_emit_csv_writes_both_files_atomically(self, small_report, tmp_path):
        metrics = tmp_path / "metrics.csv"
        hist = tmp_path / "hist.csv"
        emit_csv(small_report, metrics, hist)
        assert metrics.read_bytes().decode() == render_metrics_csv(small_report)
        assert hist.read_bytes().decode() == render_histogram_csv(small_report)
        # no stray temp files left behind
        assert sorted(p.name for p in tmp_path.iterdir()) == ["hist.csv", "metrics.csv"]

    def test_emit_csv_missing_directory_raises(self, small_report, tmp_path):
        with pytest.raises(OSError):
            emit_csv(
                small_report,
                tmp_path / "nowhere" / "metrics.csv",
                tmp_path / "hist.csv",
            )


class TestCli:
    def test_run_writes_csvs(self, tmp_path, capsys):
        metrics = tmp_path / "m.csv"
        hist = tmp_path / "h.csv"
        code = main([
            "run", "--zipf", "30,1.1,400", "--seed", "3",
            "--budgets", "256,1024",
            "--metrics-out", str(metrics), "--hist-out", str(hist),
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "6 metric rows" in out
        with open(metrics, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == METRICS_HEADER
        assert len(rows) == 7

    def test_run_is_reproducible_end_to_end(self, tmp_path):
        outs = []
        for tag in ("first", "second"):
            metrics = tmp_path / f"{tag}-m.csv"
            hist = tmp_path / f"{tag}-h.csv"
            assert main([
                "run", "--zipf", "40,1.2,300", "--seed", "7",
                "--metrics-out", str(metrics), "--hist-out", str(hist),
            ]) == 0
            outs.append((metrics.read_bytes(), hist.read_bytes()))
        assert outs[0] == outs[1]

    def test_run_rejects_malformed_zipf(self, tmp_path, capsys):
        code = main([
            "run", "--zipf", "30,1.1", "--metrics-out",
            str(tmp_path / "m.csv"), "--hist-out", str(tmp_path / "h.csv"),
        ])
        assert code == 1
        assert "vocab,s,n" in capsys.readouterr().err

    def test_run_rejects_unknown_variant(self, tmp_path, capsys):
        code = main([
            "run", "--zipf", "30,1.1,400", "--variants", "CMS-CU,bogus",
            "--metrics-out", str(tmp_path / "m.csv"),
            "--hist-out", str(tmp_path / "h.csv"),
        ])
        assert code == 1
        assert "unknown variant" in capsys.readouterr().err

    def test_run_rejects_undersized_budget(self, tmp_path, capsys):
        code = main([
            "run", "--zipf", "30,1.1,400", "--budgets", "4",
            "--metrics-out", str(tmp_path / "m.csv"),
            "--hist-out", str(tmp_path / "h.csv"),
        ])
        assert code == 1
        assert "too small" in capsys.readouterr().err

    def test_corpus_file_input(self, tmp_path, capsys):
        doc = tmp_path / "doc.txt"
        doc.write_text("the cat sat on the mat " * 20)
        code = main([
            "run", "--input", str(doc), "--budgets", "64,256",
            "--metrics-out", str(tmp_path / "m.csv"),
            "--hist-out", str(tmp_path / "h.csv"),
        ])
        assert code == 0

    def test_snapshot_save_load_query(self, tmp_path, capsys):
        snap = tmp_path / "sk.cmls"
        code = main([
            "snapshot", "--save", str(snap), "--zipf", "20,1.2,200",
            "--seed", "5", "--variant", "CMS-CU", "--budget", "4096",
        ])
        assert code == 0
        assert snap.exists()
        capsys.readouterr()

        code = main([
            "snapshot", "--load", str(snap),
            "--query", "w1", "--query-bigram", "w1 w2",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "sketch linear" in out
        lines = dict(
            line.split("\t") for line in out.splitlines() if "\t" in line
        )
        assert float(lines["w1"]) >= 1.0
        assert float(lines["w1 w2"]) >= 0.0

    def test_snapshot_save_requires_budget(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            main(["snapshot", "--save", str(tmp_path / "s"), "--zipf", "10,1.1,50"])
        assert info.value.code == 2

    def test_snapshot_save_requires_a_source(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            main(["snapshot", "--save", str(tmp_path / "s"), "--budget", "64"])
        assert info.value.code == 2

    def test_snapshot_load_corrupt_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.cmls"
        bad.write_bytes(b"garbage bytes")
        code = main(["snapshot", "--load", str(bad)])
        assert code == 1
        assert "error" in capsys.readouterr().err

    def test_snapshot_query_rejects_multiword_token(self, tmp_path, capsys):
        snap = tmp_path / "sk.cmls"
        main([
            "snapshot", "--save", str(snap), "--zipf", "10,1.1,50",
            "--budget", "1024",
        ])
        capsys.readouterr()
        code = main(["snapshot", "--load", str(snap), "--query", "two words"])
        assert code == 1
        assert "one token" in capsys.readouterr().err
