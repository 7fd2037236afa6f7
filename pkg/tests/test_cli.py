import json
import math
import subprocess
import sys

import numpy as np
import pytest

from colehopf.cli import main
from colehopf.fields import field_from_csv

# |printed - derived| at N = 1, hbar = m = 1, nu_reg = 0.01, t = 1; computed with
# 50-digit mpmath from the closed-form delta solution and the printed formula
GAP_TABLE = {
    -2.0: (0.06142931841200752, 0.087263390025473295),
    -0.5: (0.055799689437845304, 0.065311581328140149),
    0.0: (0.033021486189810745, 0.033021486189810745),
    1.5: (0.010444166842957698, 0.022071943606390529),
    3.0: (0.031238096112836763, 0.039705232553324234),
}


@pytest.fixture
def run(tmp_path):
    def _run(command, config, *flags, out="out"):
        cfg_path = tmp_path / f"{command}.json"
        cfg_path.write_text(json.dumps(config))
        out_dir = tmp_path / out
        rc = main([command, str(cfg_path), "--out-dir", str(out_dir), *flags])
        return rc, out_dir

    return _run


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


FRONT = {"epsilon": 0.1, "t": 0.5, "ic": {"kind": "tanh_front", "k": 2.0}, "grid": {"x_min": -8, "x_max": 8, "n": 2048}}


class TestSolve:
    def test_zero_data(self, run):
        cfg = {"epsilon": 0.1, "t": 0.5, "ic": {"kind": "gaussian", "amplitude": 0.0}, "grid": {"n": 128}}
        rc, out = run("solve", cfg)
        assert rc == 0
        psi = field_from_csv((out / "psi.csv").read_text())
        assert not np.any(psi.values)
        rep = read_json(out / "report.json")
        assert rep["schema"] == "colehopf/1"
        assert rep["residual"]["burgers_l2"] == 0
        assert rep["oracle"] == "zero"

    def test_front_oracle(self, run):
        rc, out = run("solve", FRONT)
        assert rc == 0
        rep = read_json(out / "report.json")
        assert rep["oracle"] == "traveling_front_exact"
        assert rep["oracle_l2_rel"] < 1e-3
        for name in ("psi.csv", "eta.csv", "psi.gp"):
            assert (out / name).exists()

    def test_paper_literal_flag(self, run):
        cfg = {"epsilon": 0.25, "t": 0.5, "grid": {"x_min": -3, "x_max": 3, "n": 61}}
        rc, out = run("solve", cfg, "--mode", "paper-literal")
        assert rc == 0
        assert read_json(out / "report.json")["mode"] == "paper_literal"

    def test_zero_time_rejected(self, run, capsys):
        rc, out = run("solve", {**FRONT, "t": 0})
        assert rc != 0
        err = json.loads(capsys.readouterr().err.strip())
        assert set(err) == {"code", "message", "context"}
        assert err["code"] == "config-parse"
        assert "t must be positive" in err["message"]
        assert not out.exists()

    def test_solver_error_is_json(self, run, capsys):
        # purely imaginary diffusion with the delta data is outside the quadrature's reach
        cfg = {"epsilon": [0.0, 0.5], "t": 1.0, "ic": {"kind": "gaussian"}, "grid": {"n": 64}}
        rc, _ = run("solve", cfg)
        assert rc == 1
        err = json.loads(capsys.readouterr().err.strip())
        assert err["code"] == "oscillatory-divergence"
        assert err["context"]["command"] == "solve"

    def test_bad_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["solve", str(path)]) == 2
        assert json.loads(capsys.readouterr().err)["code"] == "config-parse"

    def test_deterministic(self, run):
        cfg = {"epsilon": 0.1, "t": 0.5, "ic": {"kind": "gaussian", "amplitude": 1.0}, "grid": {"x_min": -6, "x_max": 6, "n": 256}}
        outs = [run("solve", cfg, out=name)[1] for name in ("a", "b")]
        for name in ("psi.csv", "eta.csv", "report.json", "psi.gp"):
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_samples_initial_data(run, tmp_path):
    rc, out = run("roundtrip", {**FRONT, "grid": {"x_min": -8, "x_max": 8, "n": 512}}, out="src")
    assert rc == 0
    (tmp_path / "psi0.csv").write_text((out / "psi.csv").read_text())
    cfg = {**FRONT, "ic": {"kind": "samples", "csv": "psi0.csv"}, "grid": {"x_min": -8, "x_max": 8, "n": 512}}
    rc, out = run("solve", cfg, out="samples")
    assert rc == 0
    rep = read_json(out / "report.json")
    assert rep["oracle"] == "solve_burgers_fd"
    assert rep["oracle_l2_rel"] < 1e-3


class TestRoundtrip:
    def test_front(self, run):
        rc, out = run("roundtrip", {**FRONT, "grid": {"x_min": -8, "x_max": 8, "n": 2048}})
        assert rc == 0
        assert read_json(out / "report.json")["linf_rel_error"] < 1e-6
        for name in ("psi", "phi", "eta", "roundtrip"):
            assert (out / f"{name}.csv").exists()

    def test_delta_rejected(self, run):
        rc, _ = run("roundtrip", {"t": 1.0})
        assert rc == 2


class TestConverge:
    def test_front_orders(self, run):
        cfg = {**FRONT, "grids": [256, 512, 1024, 2048], "domain": [-12, 12]}
        rc, out = run("converge", cfg)
        assert rc == 0
        rep = read_json(out / "converge.json")
        for name in ("fd", "colehopf"):
            assert rep["solvers"][name]["orders"]["fitted"] >= 1.9
        lines = (out / "converge.dat").read_text().splitlines()
        assert len([ln for ln in lines if not ln.startswith("#")]) == 4
        assert (out / "converge.gp").exists()

    def test_two_grids_rejected(self, run, capsys):
        rc, _ = run("converge", {**FRONT, "grids": [256, 512]})
        assert rc == 2
        assert json.loads(capsys.readouterr().err)["code"] == "config-parse"

    def test_zero_is_exact(self, run):
        cfg = {"epsilon": 0.1, "t": 0.5, "ic": {"kind": "gaussian", "amplitude": 0.0}, "grids": [32, 64, 128]}
        rc, out = run("converge", cfg)
        assert rc == 0
        rep = read_json(out / "converge.json")
        assert rep["solvers"]["fd"]["orders"]["fitted"] == "exact"
        assert rep["solvers"]["colehopf"]["orders"]["fitted"] == "exact"


def eq13_config(N, nu=0.01, n=41):
    return {"strength_N": N, "hbar": 1.0, "mass": 1.0, "nu_reg": nu, "t": 1.0, "grid": {"x_min": -10, "x_max": 10, "n": n}}


class TestCompareEq13:
    def test_zero_strength(self, run):
        rc, out = run("compare-eq13", eq13_config(0.0))
        assert rc == 0
        rep = read_json(out / "eq13_compare.json")
        for conv in ("standard", "paper"):
            assert rep["summary"][conv]["max_abs_gap"] == 0
        assert rep["agreement_asserted"] is False

    def test_gap_table(self, run):
        rc, out = run("compare-eq13", eq13_config(1.0))
        assert rc == 0
        rows = {r["x"]: r for r in read_json(out / "eq13_compare.json")["points"]}
        for x, (std, pap) in GAP_TABLE.items():
            assert rows[x]["gap_standard"] == pytest.approx(std, rel=1e-9)
            assert rows[x]["gap_paper"] == pytest.approx(pap, rel=1e-9)
        assert (out / "eq13.dat").exists() and (out / "eq13.gp").exists()

    @pytest.mark.parametrize("N", [0.5, 1.0, 2.0])
    def test_completes(self, run, N):
        rc, out = run("compare-eq13", eq13_config(N))
        assert rc == 0
        rep = read_json(out / "eq13_compare.json")
        for conv in ("standard", "paper"):
            assert rep["summary"][conv]["singular_points"] == 0
            assert rep["summary"][conv]["max_abs_gap"] > 0

    def test_singular_strength_flagged(self, run):
        rc, out = run("compare-eq13", eq13_config(2 * math.pi))
        assert rc == 0
        rep = read_json(out / "eq13_compare.json")
        assert all(r["singular_standard"] and r["singular_paper"] for r in rep["points"])
        assert all(r["paper_standard"] is None for r in rep["points"])
        assert rep["warnings"]

    def test_needs_delta(self, run):
        rc, _ = run("compare-eq13", {"ic": {"kind": "tanh_front"}, "epsilon": 0.1})
        assert rc == 2

    def test_viscosity_trend_recorded(self, run):
        rc, out = run("compare-eq13", eq13_config(1.0, n=401))
        trend = read_json(out / "eq13_compare.json")["vanishing_viscosity"]
        assert trend["monotone_decreasing"] is True


class TestErfTable:
    def test_points(self, run):
        rc, out = run("erf-table", {"erf_points": [[1.0, 0.0], [1.0, 1.0], [0.0, 0.0]]})
        assert rc == 0
        lines = (out / "erf_table.csv").read_text().splitlines()
        assert lines[0] == "z_re,z_im,value_re,value_im,est_abs_error,method"
        first = lines[1].split(",")
        assert float(first[2]) == pytest.approx(0.84270079294971486934, abs=1e-15)
        assert lines[3].split(",")[2:4] == ["0.0", "0.0"]

    def test_default_grid(self, run):
        rc, out = run("erf-table", {})
        assert rc == 0
        assert len((out / "erf_table.csv").read_text().splitlines()) == 1 + 25 * 13


def test_console_entry_point(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"erf_points": [[0.5, 0.5]]}))
    proc = subprocess.run(
        [sys.executable, "-m", "colehopf", "erf-table", str(cfg), "--out-dir", str(tmp_path / "o")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "o" / "erf_table.csv").exists()
