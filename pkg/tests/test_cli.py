import csv
import io
import json
from pathlib import Path

import jsonschema
import pytest

from kloosterman.cli import main

SCHEMA = json.loads((Path(__file__).parents[1] / "docs" / "report_schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_float(capsys):
    code, out, _ = run(capsys, "compute", "-p", "5", "-a", "1", "-b", "1")
    assert code == 0
    assert out == "0.3819660113\n"


def test_compute_exact(capsys):
    code, out, _ = run(capsys, "compute", "-p", "5", "-a", "1", "-b", "1", "--exact")
    assert code == 0
    assert out.splitlines() == ["0.3819660113", "[2,0,1,1,0]"]


def test_compute_kr(capsys):
    code, out, _ = run(capsys, "compute", "-p", "5", "-a", "1", "-b", "1", "-r", "2", "--exact")
    assert code == 0
    assert out.splitlines()[1] == "[1,1,2,0,0]"


def test_compute_not_prime(capsys):
    code, _, err = run(capsys, "compute", "-p", "4", "-a", "1", "-b", "1")
    assert code == 2
    assert "4 is not an odd prime" in err


def test_compute_degenerate(capsys):
    code, _, err = run(capsys, "compute", "-p", "7", "-a", "1", "-b", "7")
    assert code == 2 and "divides ab" in err
    code, out, _ = run(capsys, "compute", "-p", "7", "-a", "1", "-b", "7", "--degenerate")
    assert code == 0 and out == "-1\n"


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["compute"],
    ["compute", "-p", "5", "-a", "1"],
    ["compute", "-p", "x", "-a", "1", "-b", "1"],
    ["compute", "-p", "2", "-a", "1", "-b", "1"],
    ["compute", "-p", "9", "-a", "1", "-b", "1"],
    ["compute", "-p", "5", "-a", "0", "-b", "0", "--degenerate"],
    ["compute", "-p", "5", "-a", "1", "-b", "1", "-r", "0"],
    ["compute", "-p", "5", "-a", "1", "-b", "0", "-r", "2", "--degenerate"],
    ["verify", "--from", "10", "--to", "9"],
    ["verify", "--from", "24", "--to", "28"],
    ["verify", "--from", "3"],
    ["verify", "--from", "3", "--to", "7", "--checks", "sq,bogus"],
    ["verify", "--from", "3", "--to", "7", "--checks", ","],
    ["verify", "--from", "3", "--to", "7", "--mode", "approx"],
    ["verify", "--from", "3", "--to", "7", "--policy", "sampled"],
    ["verify", "--from", "3", "--to", "7", "--format", "xml"],
    ["verify", "--from", "3", "--to", "7", "--jobs", "0"],
    ["batch", "-p", "2"],
    ["batch", "-p", "15"],
    ["batch"],
    ["kr", "-r", "0", "--from", "3", "--to", "11"],
    ["kr", "-r", "1", "--from", "12", "--to", "3"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_help_exits_0(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    assert "compute" in out


def test_verify_sq_exact(capsys):
    code, out, _ = run(capsys, "verify", "--from", "3", "--to", "101", "--checks", "sq",
                       "--mode", "exact", "--jobs", "1")
    assert code == 0
    assert "no counterexamples" in out


def test_verify_bounds_csv(tmp_path, capsys):
    path = tmp_path / "bounds.csv"
    code, out, _ = run(capsys, "verify", "--from", "3", "--to", "199", "--checks", "bounds",
                       "--format", "csv", "--out", str(path), "--jobs", "1")
    assert code == 0 and out == ""
    raw = path.read_bytes()
    assert b"\r\n" not in raw
    rows = list(csv.DictReader(io.StringIO(raw.decode("utf-8"))))
    assert rows[0]["p"] == "3" and rows[0]["check"] == "bounds"
    assert len(rows) == sum(1 for _ in rows)
    assert all(float(r["weil_ratio"]) <= 1 for r in rows)
    assert rows[0].keys() >= {"p", "a", "b", "check", "exact_pass", "float_residual",
                              "weil_ratio", "kloos_ratio", "corollary_ratio"}


def test_verify_json_schema(capsys):
    code, out, _ = run(capsys, "verify", "--from", "3", "--to", "23", "--format", "json",
                       "--records", "--jobs", "1", "--sentinel", "0.5")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["ok"] and doc["counterexamples"] == []
    assert doc["sentinel"]["ok"] is True
    assert list(doc)[:3] == ["schema_version", "kind", "prime_range"]


def test_verify_sentinel_failure_exit_1(capsys):
    code, _, _ = run(capsys, "verify", "--from", "3", "--to", "7", "--checks", "bounds",
                     "--sentinel", "0.99", "--jobs", "1")
    assert code == 1


def test_verify_counterexample_exit_1(capsys, monkeypatch):
    from kloosterman import identities

    monkeypatch.setattr(identities, "kloosterman_float", lambda m, a, b, **kw: float(m.p))
    code, out, _ = run(capsys, "verify", "--from", "3", "--to", "11", "--checks", "bounds",
                       "--jobs", "1")
    assert code == 1
    assert "COUNTEREXAMPLES" in out


def test_verify_timing_only_when_asked(capsys):
    _, out, _ = run(capsys, "verify", "--from", "3", "--to", "7", "--format", "json",
                    "--records", "--jobs", "1")
    assert "elapsed" not in out
    _, out, _ = run(capsys, "verify", "--from", "3", "--to", "7", "--format", "json",
                    "--records", "--timing", "--jobs", "1")
    jsonschema.validate(json.loads(out), SCHEMA)
    assert "elapsed" in out


def test_verify_deterministic_across_jobs(tmp_path, capsys):
    outs = []
    for jobs in ("1", "3"):
        path = tmp_path / f"r{jobs}.json"
        code, _, _ = run(capsys, "verify", "--from", "3", "--to", "43", "--format", "json",
                         "--records", "--out", str(path), "--jobs", jobs)
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_batch(capsys):
    code, out, _ = run(capsys, "batch", "-p", "5")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["t", "value"]
    assert len(rows) == 5
    assert rows[1] == ["1", "0.3819660113"]
    assert abs(sum(float(r[1]) for r in rows[1:]) - 1.0) < 1e-6 * 5


def test_batch_angles_fft(capsys):
    code, out, _ = run(capsys, "batch", "-p", "101", "--angles", "--method", "fft")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 100
    assert all(0.0 <= float(r["angle"]) <= 3.1415926536 for r in rows)


def test_kr_reports(capsys):
    code, out, _ = run(capsys, "kr", "-r", "1", "--from", "3", "--to", "499", "--jobs", "1")
    assert code == 0
    assert "100..999" in out
    code, out, _ = run(capsys, "kr", "-r", "2", "--from", "3", "--to", "499", "--format", "json",
                       "--jobs", "1")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["kind"] == "kr_scan" and doc["r"] == 2
    assert len(doc["per_prime"]) == doc["primes_scanned"]
    code, out, _ = run(capsys, "kr", "-r", "3", "--from", "3", "--to", "50", "--format", "csv",
                       "--jobs", "1")
    assert code == 0 and out.startswith("p,a,b,max_abs,max_ratio\n")


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "kloosterman", "compute", "-p", "5", "-a", "1",
                          "-b", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "0.3819660113\n"
