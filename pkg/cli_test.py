"""
Command-line tests: output files, determinism, exit codes
"""

import csv
import json

import pytest

from qesprob.cli import EXIT_BAD_CONFIG, EXIT_IO, EXIT_OK, main
from qesprob.models import OutputFormat, RunConfig
from qesprob.services.runner import CSV_HEADER, SUMMARY_KEYS, run_estimate
from qesprob.services.selftest import run_selftest


def estimate(out, *extra):
    return main(["estimate", "--samples", "2000", "--batch-size", "500", "--seed", "7", "--out", str(out), *extra])


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


class TestEstimateCommand:
    def test_writes_json_and_csv(self, tmp_path, capsys):
        assert estimate(tmp_path / "run") == EXIT_OK
        summary = json.loads((tmp_path / "run.json").read_text())
        rows = read_rows(tmp_path / "run.csv")

        assert list(summary)[: len(SUMMARY_KEYS)] == SUMMARY_KEYS
        assert summary["ensemble"] == "hilbert_schmidt"
        assert summary["samples"] == 2000
        assert rows[0] == CSV_HEADER
        assert len(rows) == 1 + 4
        assert [int(r[0]) for r in rows[1:]] == [0, 1, 2, 3]
        assert float(rows[-1][CSV_HEADER.index("running_estimate")]) == summary["estimate"]
        assert json.loads(capsys.readouterr().out) == summary

    def test_suffix_on_out_is_replaced(self, tmp_path):
        assert estimate(tmp_path / "run.json", "--format", "json") == EXIT_OK
        assert (tmp_path / "run.json").exists()
        assert not (tmp_path / "run.csv").exists()

    def test_rerun_is_byte_identical(self, tmp_path):
        assert estimate(tmp_path / "a", "--weight", "qes-eig") == EXIT_OK
        assert estimate(tmp_path / "b", "--weight", "qes-eig") == EXIT_OK
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_thread_count_does_not_change_output(self, tmp_path):
        assert estimate(tmp_path / "one", "--ensemble", "bures", "--weight", "cross", "--threads", "1") == EXIT_OK
        assert estimate(tmp_path / "three", "--ensemble", "bures", "--weight", "cross", "--threads", "3") == EXIT_OK
        assert (tmp_path / "one.json").read_bytes() == (tmp_path / "three.json").read_bytes()
        assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "three.csv").read_bytes()

    def test_cross_run_reports_target_reference(self, tmp_path, capsys):
        assert estimate(tmp_path / "run", "--ensemble", "bures", "--weight", "cross") == EXIT_OK
        summary = json.loads(capsys.readouterr().out)
        assert summary["reference_value"] == pytest.approx(8 / 33)

    def test_bob_party(self, tmp_path, capsys):
        assert estimate(tmp_path / "run", "--weight", "qes-raw", "--party", "bob", "--format", "json") == EXIT_OK
        assert json.loads(capsys.readouterr().out)["party"] == "bob"

    @pytest.mark.parametrize(
        "extra",
        [
            ["--batch-size", "5000"],
            ["--ensemble", "bures", "--field", "real"],
            ["--ensemble", "bures", "--weight", "qes-unitary"],
            ["--weight-cap", "0"],
            ["--threads", "0"],
        ],
    )
    def test_invalid_configuration(self, tmp_path, capsys, extra):
        assert estimate(tmp_path / "run", *extra) == EXIT_BAD_CONFIG
        assert "invalid configuration" in capsys.readouterr().err
        assert not (tmp_path / "run.json").exists()

    def test_unwritable_output(self, tmp_path):
        assert estimate(tmp_path / "missing" / "run") == EXIT_IO

    def test_missing_samples_is_usage_error(self):
        with pytest.raises(SystemExit) as e:
            main(["estimate"])
        assert e.value.code == 2


class TestSelftestCommand:
    def test_selftest_passes(self, capsys):
        assert main(["selftest"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "❌ FAIL" not in out
        assert "All checks passed" in out

    def test_run_selftest_returns_results(self):
        tester = run_selftest()
        assert not tester.failed
        assert len(tester.test_results) == 8


class TestEnvironment:
    def test_unknown_log_level_is_bad_config(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("QESPROB_LOG_LEVEL", "VERBOSE")
        assert estimate(tmp_path / "run") == EXIT_BAD_CONFIG
        assert "QESPROB_LOG_LEVEL" in capsys.readouterr().err
        assert not (tmp_path / "run.json").exists()

    def test_lowercase_log_level_accepted(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QESPROB_LOG_LEVEL", "debug")
        assert estimate(tmp_path / "run", "--format", "json") == EXIT_OK


class TestBlockSize:
    def test_block_size_only_reorders_sums(self, tmp_path):
        """Unit weights: counts and estimate identical across block sizes"""
        summaries = [
            run_estimate(RunConfig(
                samples=3000, batch_size=1000, master_seed=5, threads=1, block_size=block,
                output_format=OutputFormat.JSON, output_path=str(tmp_path / f"b{block}"),
            ))
            for block in (1000, 700)
        ]
        first, second = summaries
        assert first.estimate == second.estimate
        assert first.n_batches == second.n_batches
        assert first.p_above_threshold == second.p_above_threshold
        assert first.mean_v_a_relative == pytest.approx(second.mean_v_a_relative, rel=1e-12)
