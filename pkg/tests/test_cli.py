import json
import os

import pytest

from diophlab.cli import main


def run(argv):
    return main(argv)


class TestConstantsCommand:
    def test_table(self, capsys):
        assert run(["constants", "--digits", "12"]) == 0
        out = capsys.readouterr().out
        assert "lambda3" in out and "0.424506903418" in out

    def test_json_digits(self, capsys):
        assert run(["constants", "--json", "--digits", "50"]) == 0
        payload = json.loads(capsys.readouterr().out)
        digits = payload["values"]["lambda3"].replace("0.", "")
        assert len(digits) == 50
        assert payload["defining_polynomials"]["lambda3"] == ["-1", "3", "0", "-4", "1"]

    def test_verify(self, capsys):
        assert run(["constants", "--verify", "1e-40", "--digits", "8"]) == 0
        out = capsys.readouterr().out
        assert "all 10 identities below" in out


class TestVerifyMaps:
    def test_small_pass(self, capsys, tmp_path):
        trail = str(tmp_path / "trail.jsonl")
        assert run(["verify-maps", "--trials", "25", "--seed", "5",
                    "--coeff-bound", "200", "--jsonl", trail]) == 0
        lines = open(trail).read().splitlines()
        assert len(lines) == 4 * 25
        row = json.loads(lines[0])
        assert set(row) >= {"identity", "ok", "seed"}
        assert all(json.loads(l)["ok"] for l in lines)

    def test_zero_trials_usage_error(self):
        assert run(["verify-maps", "--trials", "0"]) == 2

    def test_determinism(self, capsys, tmp_path):
        a, b = str(tmp_path / "a.jsonl"), str(tmp_path / "b.jsonl")
        run(["verify-maps", "--trials", "10", "--seed", "3", "--jsonl", a])
        run(["verify-maps", "--trials", "10", "--seed", "3", "--jsonl", b])
        assert open(a).read() == open(b).read()


class TestScanPipeline:
    def test_end_to_end(self, tmp_path, capsys):
        out = str(tmp_path / "run")
        assert run(["minpoints", "--xi", "2^(1/4)", "--n", "3",
                    "--max-x0", "2e4", "--shards", "2", "--out", out]) == 0
        for name in ("records.jsonl", "config.json", "cursor.json"):
            assert os.path.exists(os.path.join(out, name))
        config = json.load(open(os.path.join(out, "config.json")))
        assert config["n"] == 3 and config["shift"] == 1

        assert run(["analyze", "--in", os.path.join(out, "records.jsonl"),
                    "--out", out, "--hyp-lambda", "2/5", "--hyp-c", "1"]) == 0
        for name in ("chain.csv", "cij.csv", "schmidt.csv", "exponents.csv",
                     "hypothesis.csv"):
            assert os.path.exists(os.path.join(out, name))

        assert run(["oracle-check", "--in", os.path.join(out, "records.jsonl"),
                    "--bound", "1e4"]) == 0

    def test_reproducible_runs(self, tmp_path, capsys):
        a, b = str(tmp_path / "a"), str(tmp_path / "b")
        for out, shards in ((a, 1), (b, 3)):
            assert run(["minpoints", "--xi", "sqrt2", "--n", "1",
                        "--max-x0", "1e4", "--shards", str(shards),
                        "--out", out]) == 0
        ra = open(os.path.join(a, "records.jsonl")).read()
        rb = open(os.path.join(b, "records.jsonl")).read()
        assert ra == rb

    def test_resume_appends(self, tmp_path, capsys):
        out = str(tmp_path / "run")
        assert run(["minpoints", "--xi", "2^(1/4)", "--n", "3",
                    "--max-x0", "5000", "--out", out]) == 0
        first = open(os.path.join(out, "records.jsonl")).read()
        assert run(["minpoints", "--xi", "2^(1/4)", "--n", "3",
                    "--max-x0", "20000", "--out", out]) == 0
        resumed = open(os.path.join(out, "records.jsonl")).read()
        assert resumed.startswith(first)

        fresh_dir = str(tmp_path / "fresh")
        assert run(["minpoints", "--xi", "2^(1/4)", "--n", "3",
                    "--max-x0", "20000", "--out", fresh_dir]) == 0
        fresh = open(os.path.join(fresh_dir, "records.jsonl")).read()
        assert resumed == fresh

    def test_validation_errors(self, capsys):
        assert run(["minpoints", "--xi", "sqrt2", "--n", "1", "--out", "/tmp/x"]) == 2
        assert run(["minpoints", "--xi", "nonsense{", "--n", "1",
                    "--max-x0", "10", "--out", "/tmp/x"]) == 2

    def test_missing_records_io_error(self, tmp_path):
        missing = str(tmp_path / "nope.jsonl")
        assert run(["analyze", "--in", missing, "--out", str(tmp_path)]) == 4


class TestProp43Command:
    def test_small_run(self, capsys):
        assert run(["prop43-test", "--trials", "50", "--seed", "2"]) == 0
        assert "50 instances, 0 failures" in capsys.readouterr().out

    def test_zero_trials(self):
        assert run(["prop43-test", "--trials", "0"]) == 2
