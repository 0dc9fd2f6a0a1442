import csv
import json
import math
import subprocess
import sys

import pytest

from swapqkd import metrics
from swapqkd.cli import CSV_HEADER, main
from swapqkd.transforms import AngleSet


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_hadamard(capsys):
    code, out, _ = run(capsys, "eval", "--mode", "single-alice", "--theta-a", "0.5", "--phi-a", "0.5")
    assert code == 0
    doc = json.loads(out)
    for src in ("closed_form", "simulation"):
        assert doc[src]["expected_error"] == pytest.approx(0.25, abs=1e-12)
        assert doc[src]["shannon_entropy"] == pytest.approx(0.5, abs=1e-12)
        assert doc[src]["mutual_information"] == pytest.approx(0.5, abs=1e-12)


def test_eval_practical_combined(capsys):
    code, out, _ = run(
        capsys, "eval", "--mode", "combined", "--theta-a", "0.1875", "--phi-a", "0.25",
        "--theta-b", "0.4375", "--phi-b", "0.25", "--evaluator", "cf",
    )
    doc = json.loads(out)
    assert code == 0 and "simulation" not in doc
    assert doc["closed_form"]["expected_error"] == pytest.approx(0.39288, abs=1e-5)
    assert doc["closed_form"]["shannon_entropy"] == pytest.approx(0.91223, abs=1e-5)


def test_eval_zero_angles(capsys):
    _, out, _ = run(capsys, "eval", "--mode", "combined")
    doc = json.loads(out)
    assert doc["simulation"]["expected_error"] == pytest.approx(0, abs=1e-12)
    assert doc["simulation"]["mutual_information"] == pytest.approx(1, abs=1e-12)


def test_sampling_demo_converges_and_is_seeded(capsys):
    argv = ["eval", "--theta-a", "0.5", "--phi-a", "0.5", "--seed", "3", "--samples", "200000"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    s = json.loads(a)["sampling"]
    assert s["expected_error"] == pytest.approx(0.25, abs=5e-3)
    assert s["shannon_entropy"] == pytest.approx(0.5, abs=5e-3)


def test_sweep_hadamard_peak(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--mode", "single-alice", "--sweep", "theta-a:0:1:9", "--phi-a", "0.5", "--out", str(out))
    assert code == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert "0.500000,0.500000,0.000000,0.000000,0.250000,0.250000,0.500000,0.500000,0.500000" in lines
    assert len(lines) == 10


def test_single_cell_sweep_equals_eval(capsys):
    common = ["--mode", "combined", "--theta-a", "0.25", "--phi-a", "0.5", "--phi-b", "0.5"]
    _, ev, _ = run(capsys, "eval", "--format", "csv", "--theta-b", "0.5", *common)
    _, sw, _ = run(capsys, "sweep", "--sweep", "theta-b:0.5:1.5:2", *common)
    assert sw.splitlines()[:2] == ev.splitlines()


def test_sweep_deterministic_bytes(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        run(capsys, "sweep", "--mode", "combined", "--sweep", "theta-a:-1:1:5", "--sweep", "theta-b:0:1:3",
            "--phi-a", "0.25", "--phi-b", "0.25", "--out", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_csv_round_trip(capsys, tmp_path):
    out = tmp_path / "r.csv"
    run(capsys, "sweep", "--mode", "combined", "--sweep", "theta-a:-1:1:9", "--sweep", "phi-b:0:1:5",
        "--theta-b", "0.4375", "--phi-a", "0.25", "--out", str(out))
    with open(out, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 45
    for r in rows:
        a = AngleSet.from_pi(*(float(r[k]) for k in ("theta_a", "phi_a", "theta_b", "phi_b")))
        cf = metrics.closed_form(a, "combined")
        sim = metrics.simulated(a, "combined")
        assert float(r["pe_cf"]) == pytest.approx(cf["expected_error"], abs=5e-7)
        assert float(r["h_cf"]) == pytest.approx(cf["shannon_entropy"], abs=5e-7)
        assert float(r["iae_cf"]) == pytest.approx(1 - cf["shannon_entropy"], abs=5e-7)
        assert float(r["pe_sim"]) == pytest.approx(sim["expected_error"], abs=5e-7)
        assert float(r["h_sim"]) == pytest.approx(sim["shannon_entropy"], abs=5e-7)


def test_sweep_json_and_cf_only(capsys):
    _, out, _ = run(capsys, "sweep", "--sweep", "theta-a:0:1:3", "--phi-a", "0.5", "--format", "json", "--evaluator", "cf")
    rows = json.loads(out)
    assert [r["theta_a"] for r in rows] == [0, 0.5, 1]
    assert all(r["pe_sim"] is None for r in rows)


def test_optimize_single_error(capsys):
    code, out, _ = run(capsys, "optimize", "--mode", "single-alice", "--objective", "error")
    assert code == 0
    assert json.loads(out)["best_value"] == pytest.approx(1 / 3, abs=1e-6)


def test_optimize_combined_entropy(capsys):
    _, out, _ = run(capsys, "optimize", "--mode", "combined", "--objective", "entropy")
    doc = json.loads(out)
    assert doc["best_value"] == pytest.approx(0.9452, abs=5e-4)
    assert doc["mutual_information"] == pytest.approx(0.0548, abs=5e-4)


def test_optimize_pinned_identity(capsys):
    _, out, _ = run(capsys, "optimize", "--theta-a", "0", "--phi-a", "0")
    assert json.loads(out)["best_value"] == 0


def test_verify_reports_and_fails(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 1  # convention search and combined oracle do not match
    lines = out.splitlines()
    assert any(ln.startswith("PASS") and "overview(0, 0, 0, 0)pi error" in ln for ln in lines)
    assert any(ln.startswith("PASS") and "overview(0.5, 0.5, 0, 0)pi information" in ln for ln in lines)
    warn = [ln for ln in lines if ln.startswith("WARN")]
    assert len(warn) == 1 and "0.40625" in warn[0] and "0.334" in warn[0]
    assert any(ln.startswith("PASS") and "overview(0, 0.25, 0.5, 0.5)pi information" in ln for ln in lines)


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--mode", "both"],
        ["eval", "--theta-a", "abc"],
        ["eval", "--theta-a", "inf"],
        ["eval", "--convention", "ZZ-tf"],
        ["eval", "--seed", "1", "--samples", "0"],
        ["sweep"],
        ["sweep", "--sweep", "theta-a:0:1"],
        ["sweep", "--sweep", "omega:0:1:3"],
        ["sweep", "--sweep", "theta-a:1:0:3"],
        ["optimize", "--tolerance", "0"],
        ["frobnicate"],
        [],
    ],
)
def test_parse_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_auto_convention_exit_3(capsys):
    code, _, err = run(capsys, "eval", "--convention", "auto")
    assert code == 3
    assert "RQ-tf" in err


def test_unwritable_exit_4(capsys, tmp_path):
    bad = tmp_path / "missing" / "x.csv"
    assert run(capsys, "sweep", "--sweep", "theta-a:0:1:3", "--out", str(bad))[0] == 4


def test_module_entry_point():
    p = subprocess.run(
        [sys.executable, "-m", "swapqkd", "eval", "--theta-a", "0.5", "--phi-a", "0.5", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert p.returncode == 0
    assert p.stdout.splitlines()[1].startswith("0.500000,0.500000")
    assert math.isclose(float(p.stdout.splitlines()[1].split(",")[4]), 0.25)
