import json
import subprocess
import sys

import pytest

from vcnls.cli import FIGURES, main


def manifest(out, name):
    return json.loads((out / f"{name}.manifest.json").read_text())


def test_solve_writes_outputs(tmp_path, capsys):
    code = main(["solve", "--scenario", "bending_dark", "--out", str(tmp_path)])
    assert code == 0
    m = manifest(tmp_path, "bending_dark_solve")
    assert m["passed"]
    import hashlib

    assert len(m["outputs"]) == 2
    for f in m["outputs"]:
        assert hashlib.sha256((tmp_path / f["path"]).read_bytes()).hexdigest() == f["sha256"]


def test_solve_is_byte_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    main(["solve", "--scenario", "bending_bright", "--out", str(a)])
    main(["solve", "--scenario", "bending_bright", "--out", str(b)])
    for name in ("bending_bright_phase.csv", "bending_bright_psi.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_solve_reports_blowup(tmp_path, capsys):
    assert main(["solve", "--scenario", "example1", "--alpha0", "-0.5", "--out", str(tmp_path)]) == 0
    assert manifest(tmp_path, "example1_solve")["predicted_blowup"] == pytest.approx(1.0, abs=1e-9)


def test_json_format(tmp_path):
    assert main(["solve", "--scenario", "sch1", "--format", "json", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "sch1_phase.json").read_text())
    assert {"t", "alpha", "mu"} <= set(data[0])


@pytest.mark.parametrize("fid", sorted(FIGURES))
def test_figures_pass_spot_check(tmp_path, fid):
    assert main(["figure", fid, "--out", str(tmp_path)]) == 0
    assert manifest(tmp_path, fid)["spot_check"]["max_deviation"] <= 1e-8


def test_verify_single_and_threshold(tmp_path, capsys):
    assert main(["verify", "sch1", "--workers", "1"]) == 0
    assert main(["verify", "sch1", "--threshold", "1e-30", "--workers", "1"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_usage_errors(tmp_path, capsys):
    assert main(["solve", "--scenario", "missing", "--out", str(tmp_path)]) == 2
    assert main(["figure", "fig99", "--out", str(tmp_path)]) == 2
    with pytest.raises(SystemExit):
        main(["solve"])


def test_simulate_command(tmp_path, capsys):
    code = main(["simulate", "--scenario", "example4_bright", "--t1", "0.5", "--snapshots", "3", "--out", str(tmp_path)])
    assert code == 0
    m = manifest(tmp_path, "example4_bright_simulate")
    assert m["run"]["stop_reason"] == "completed" and m["errors"][-1]["L2"] <= 1e-4


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "vcnls", "verify", "example1", "--workers", "1"],
                         capture_output=True, text=True, timeout=300)
    assert res.returncode == 0, res.stderr
