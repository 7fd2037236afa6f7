"""Command-line entry point.

    colehopf <command> <config.json> [--out-dir DIR] [--mode derived|paper-literal]

Commands: solve, roundtrip, converge, compare-eq13, erf-table. Every
failure exits nonzero with one JSON object {code, message, context} on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import special
from .errors import ColeHopfError, ConfigError
from .fields import ComplexField, field_to_csv, fmt
from .heat import (
    SolutionMode,
    delta_eta_closed_form,
    evolve_heat_quadrature,
    paper_eq13_terms,
    psi_delta_closed_form,
    solve_burgers_colehopf,
)
from .initial import Delta, InitialCondition, TanhFront, ic_from_dict
from .oracle import FDConfig, convergence_study, relative_l2, solve_burgers_fd, traveling_front_exact
from .params import ComplexDiffusion, Grid1D, PhysicalParams, epsilon_of, grid_from_dict, params_from_dict
from .report import SolveReport, atomic_write, dat_table
from .transform import (
    burgers_residual,
    eta_from_potential,
    potential_from_velocity,
    velocity_from_eta,
)

logger = logging.getLogger("colehopf")

COMMANDS = ("solve", "roundtrip", "converge", "compare-eq13", "erf-table")
EXIT_CONFIG = 2
EXIT_SOLVER = 1
DEFAULT_NU_SWEEP = (1e-1, 1e-2, 1e-3)


@dataclass
class RunConfig:
    command: str
    params: PhysicalParams
    grid: Grid1D
    ic: InitialCondition
    t: float
    mode: SolutionMode
    out_dir: str
    epsilon: ComplexDiffusion
    extra: dict[str, Any] = field(default_factory=dict)


def _parse_epsilon(value: Any) -> ComplexDiffusion:
    if isinstance(value, dict):
        return ComplexDiffusion(complex(float(value.get("re", 0.0)), float(value.get("im", 0.0))))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return ComplexDiffusion(complex(float(value[0]), float(value[1])))
    return ComplexDiffusion(complex(float(value)))


def load_run_config(command: str, path: str, out_dir: str | None = None, mode: str | None = None) -> RunConfig:
    """Read a JSON run config; every key is optional.

    ``epsilon`` (number, [re, im] or {re, im}) overrides nu_reg + i hbar/2m,
    which is how real-diffusion runs are expressed.
    """
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}", commands=list(COMMANDS))
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", path=path) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", path=path) from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object", path=path)

    params = params_from_dict(data)
    grid = grid_from_dict(data.get("grid"))
    base_dir = os.path.dirname(os.path.abspath(path))
    ic = ic_from_dict(data["ic"], base_dir) if "ic" in data else Delta(params.strength_N)
    try:
        eps = _parse_epsilon(data["epsilon"]) if "epsilon" in data else epsilon_of(params)
        t = float(data.get("t", 1.0))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad numeric value: {exc}") from exc
    if command != "erf-table" and not t > 0:
        raise ConfigError("t must be positive", t=t)
    resolved_mode = SolutionMode.parse(mode if mode is not None else data.get("mode", "derived"))
    out = out_dir if out_dir is not None else data.get("out_dir", ".")
    if not os.path.isabs(out) and out_dir is None:
        out = os.path.join(base_dir, out)
    extra = {k: v for k, v in data.items() if k in ("grids", "fd", "nu_sweep", "erf_points", "domain", "steps")}
    return RunConfig(command, params, grid, ic, t, resolved_mode, out, eps, extra)


def _fd_config(cfg: RunConfig) -> FDConfig:
    settings = dict(cfg.extra.get("fd") or {})
    if "time_scheme" not in settings and cfg.epsilon.real <= 0:
        settings["time_scheme"] = "imex"
    try:
        return FDConfig(**settings)
    except TypeError as exc:
        raise ConfigError(f"bad fd settings: {exc}") from exc


def _oracle(cfg: RunConfig, t: float) -> tuple[str, np.ndarray | None]:
    x = cfg.grid.nodes
    ic, eps = cfg.ic, cfg.epsilon.epsilon
    if isinstance(ic, TanhFront):
        return "traveling_front_exact", traveling_front_exact(ic.k, eps, x, t)
    if isinstance(ic, Delta):
        return "psi_delta_closed_form", psi_delta_closed_form(ic.strength, x, t, eps)
    if ic.is_zero:
        return "zero", np.zeros(cfg.grid.n, dtype=complex)
    psi0 = ComplexField(cfg.grid, ic.velocity(x, eps), 0.0, "psi")
    return "solve_burgers_fd", solve_burgers_fd(psi0, t, eps, _fd_config(cfg)).values


def _gnuplot_overlay(title: str, data_file: str, columns: list[tuple[int, int, str]]) -> str:
    plots = ", \\\n     ".join(f"'{data_file}' using {a}:{b} with lines title '{label}'" for a, b, label in columns)
    return (
        "set datafile commentschars '#'\n"
        "set datafile separator ','\n"
        f"set title '{title}'\n"
        "set xlabel 'x'\n"
        f"plot {plots}\n"
    )


def run_solve(cfg: RunConfig) -> SolveReport:
    eps = cfg.epsilon.epsilon
    report = SolveReport("solve")
    start = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        psi = solve_burgers_colehopf(cfg.ic, cfg.grid, cfg.t, eps, cfg.mode)
        # second slice one grid spacing later for the PDE residual
        dt = cfg.grid.spacing
        psi_next = solve_burgers_colehopf(cfg.ic, cfg.grid, cfg.t + dt, eps, cfg.mode)
        if isinstance(cfg.ic, Delta):
            eta_vals = delta_eta_closed_form(cfg.ic.strength, cfg.grid.nodes, cfg.t, eps)
            eta = ComplexField(cfg.grid, eta_vals, cfg.t, "eta", {"panels": 0})
        else:
            eta = evolve_heat_quadrature(cfg.ic, cfg.grid, cfg.t, eps)
        oracle_kind, oracle_vals = _oracle(cfg, cfg.t)
    report.timings["solve"] = time.perf_counter() - start
    report.warnings.extend(str(w.message) for w in caught)

    report.data.update(
        {
            "mode": cfg.mode.value,
            "epsilon": eps,
            "t": cfg.t,
            "ic": cfg.ic.to_dict(),
            "grid": {"x_min": cfg.grid.x_min, "x_max": cfg.grid.x_max, "n": cfg.grid.n},
            "residual": {"burgers_l2": burgers_residual(psi, psi_next, eps), "dt": dt},
            "quadrature_panels": {"psi": psi.info.get("panels"), "eta": eta.info.get("panels")},
            "oracle": oracle_kind,
            "oracle_l2_rel": relative_l2(psi.values, oracle_vals) if oracle_vals is not None else None,
        }
    )
    os.makedirs(cfg.out_dir, exist_ok=True)
    atomic_write(os.path.join(cfg.out_dir, "psi.csv"), field_to_csv(psi))
    atomic_write(os.path.join(cfg.out_dir, "eta.csv"), field_to_csv(eta))
    atomic_write(os.path.join(cfg.out_dir, "report.json"), report.to_json())
    atomic_write(
        os.path.join(cfg.out_dir, "psi.gp"),
        _gnuplot_overlay(f"psi at t = {fmt(cfg.t)}", "psi.csv", [(1, 2, "Re psi"), (1, 3, "Im psi"), (1, 4, "|psi|")]),
    )
    return report


def run_roundtrip(cfg: RunConfig) -> SolveReport:
    eps = cfg.epsilon.epsilon
    if isinstance(cfg.ic, Delta):
        raise ConfigError("roundtrip needs sampleable initial data, not a delta")
    psi = ComplexField(cfg.grid, cfg.ic.velocity(cfg.grid.nodes, eps), 0.0, "psi")
    report = SolveReport("roundtrip")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        phi = potential_from_velocity(psi)
        eta = eta_from_potential(phi, eps)
        back = velocity_from_eta(eta, eps)
    report.warnings.extend(str(w.message) for w in caught)
    err = float(np.max(np.abs(back.values - psi.values)) / (1.0 + np.max(np.abs(psi.values))))
    report.data.update(
        {
            "epsilon": eps,
            "ic": cfg.ic.to_dict(),
            "grid": {"x_min": cfg.grid.x_min, "x_max": cfg.grid.x_max, "n": cfg.grid.n},
            "linf_rel_error": err,
            "eta_diagnostics": eta.info,
        }
    )
    for name, f in (("psi", psi), ("phi", phi), ("eta", eta), ("roundtrip", back.with_values(back.values, role="psi"))):
        atomic_write(os.path.join(cfg.out_dir, f"{name}.csv"), field_to_csv(f))
    atomic_write(os.path.join(cfg.out_dir, "report.json"), report.to_json())
    return report


def run_converge(cfg: RunConfig) -> SolveReport:
    grids = cfg.extra.get("grids")
    if not isinstance(grids, list) or len(grids) < 3:
        raise ConfigError("converge needs 'grids' with at least 3 sizes", grids=grids)
    domain = tuple(cfg.extra.get("domain", (cfg.grid.x_min, cfg.grid.x_max)))
    report = convergence_study(cfg.ic, cfg.epsilon, cfg.t, grids, domain=domain, cfg=_fd_config(cfg))
    solvers = report.data["solvers"]
    for name in solvers:
        if solvers[name]["orders"]["status"] == "exact":
            solvers[name]["orders"]["fitted"] = "exact"
    hs = report.data["spacings"]
    rows = []
    for i, h in enumerate(hs):
        row = [h]
        for name in ("fd", "colehopf"):
            errs = solvers[name]["errors"]
            row.append(errs[i] if i < len(errs) else None)
        rows.append(row)
    atomic_write(os.path.join(cfg.out_dir, "converge.json"), report.to_json())
    atomic_write(os.path.join(cfg.out_dir, "converge.dat"), dat_table(["h", "err_fd", "err_colehopf"], rows))
    atomic_write(
        os.path.join(cfg.out_dir, "converge.gp"),
        "set logscale xy\nset xlabel 'h'\nset ylabel 'relative L2 error'\n"
        "plot 'converge.dat' using 1:2 with linespoints title 'finite difference', \\\n"
        "     'converge.dat' using 1:3 with linespoints title 'Cole-Hopf'\n",
    )
    return report


def vanishing_viscosity_trend(N: float, x: np.ndarray, t: float, imag: float, nus) -> dict[str, Any]:
    """Delta solution at eps = nu + i*imag for decreasing nu, with successive L2 gaps."""
    h = x[1] - x[0]
    sols = [psi_delta_closed_form(N, x, t, complex(nu, imag)) for nu in nus]
    gaps = [float(np.sqrt(h * np.sum(np.abs(a - b) ** 2))) for a, b in zip(sols, sols[1:])]
    return {
        "nu": list(nus),
        "epsilon_imag": imag,
        "successive_l2_gaps": gaps,
        "monotone_decreasing": all(b < a for a, b in zip(gaps, gaps[1:])),
    }


def run_compare_eq13(cfg: RunConfig) -> SolveReport:
    if not isinstance(cfg.ic, Delta):
        raise ConfigError("compare-eq13 needs a delta initial condition", kind=cfg.ic.kind)
    N = cfg.ic.strength
    p = cfg.params
    eps = cfg.epsilon.epsilon
    x = cfg.grid.nodes
    t = cfg.t
    report = SolveReport("compare-eq13")

    derived_error = None
    try:
        derived = psi_delta_closed_form(N, x, t, eps)
    except ColeHopfError as exc:
        derived = np.full(x.shape, np.nan + 0j)
        derived_error = exc.to_dict()

    printed = {}
    for conv in ("standard", "paper"):
        try:
            vals, singular = paper_eq13_terms(N, x, t, p.hbar, p.mass, conv)
            printed[conv] = {"values": vals, "singular": singular, "error": None}
        except ColeHopfError as exc:
            printed[conv] = {
                "values": np.full(x.shape, np.nan + 0j),
                "singular": np.ones(x.shape, dtype=bool),
                "error": exc.to_dict(),
            }

    h = cfg.grid.spacing
    summary = {}
    table_rows = []
    for conv, entry in printed.items():
        gap = np.abs(entry["values"] - derived)
        finite = np.isfinite(gap)
        summary[conv] = {
            "singular_points": int(entry["singular"].sum()),
            "max_abs_gap": float(np.max(gap[finite])) if finite.any() else None,
            "l2_gap": float(np.sqrt(h * np.sum(gap[finite] ** 2))) if finite.any() else None,
            "error": entry["error"],
        }
        if entry["singular"].all():
            report.warnings.append(f"{conv}: formula singular everywhere (exp(-i m N / hbar) = 1)")
    for i, xi in enumerate(x):
        row = {"x": xi, "derived": derived[i]}
        for conv, entry in printed.items():
            row[f"paper_{conv}"] = entry["values"][i]
            row[f"gap_{conv}"] = abs(entry["values"][i] - derived[i])
            row[f"singular_{conv}"] = bool(entry["singular"][i])
        table_rows.append(row)

    trend = None
    nus = cfg.extra.get("nu_sweep", list(DEFAULT_NU_SWEEP))
    if nus:
        try:
            trend = vanishing_viscosity_trend(N, x, t, p.hbar / (2.0 * p.mass), [float(v) for v in nus])
        except ColeHopfError as exc:
            trend = {"error": exc.to_dict()}

    report.data.update(
        {
            "N": N,
            "hbar": p.hbar,
            "mass": p.mass,
            "t": t,
            "epsilon": eps,
            "derived_error": derived_error,
            "summary": summary,
            "vanishing_viscosity": trend,
            "agreement_asserted": False,
            "points": table_rows,
        }
    )
    atomic_write(os.path.join(cfg.out_dir, "eq13_compare.json"), report.to_json())
    rows = [
        [xi, abs(derived[i]), abs(printed["standard"]["values"][i]), abs(printed["paper"]["values"][i])]
        for i, xi in enumerate(x)
    ]
    atomic_write(os.path.join(cfg.out_dir, "eq13.dat"), dat_table(["x", "abs_derived", "abs_printed_std", "abs_printed_paper"], rows))
    atomic_write(
        os.path.join(cfg.out_dir, "eq13.gp"),
        "set xlabel 'x'\nset ylabel '|psi|'\n"
        "plot 'eq13.dat' using 1:2 with lines title 'closed form (derived)', \\\n"
        "     'eq13.dat' using 1:3 with lines title 'printed formula, standard erf', \\\n"
        "     'eq13.dat' using 1:4 with lines title 'printed formula, unnormalized erf'\n",
    )
    return report


def default_erf_points() -> list[complex]:
    re = np.linspace(-6.0, 6.0, 25)
    im = np.linspace(-3.0, 3.0, 13)
    return [complex(a, b) for b in im for a in re]


def run_erf_table(cfg: RunConfig) -> SolveReport:
    pts = cfg.extra.get("erf_points")
    zs = [complex(float(a), float(b)) for a, b in pts] if pts else default_erf_points()
    lines = ["z_re,z_im,value_re,value_im,est_abs_error,method"]
    for z in zs:
        r = special.erf_complex(z)
        lines.append(f"{fmt(z.real)},{fmt(z.imag)},{fmt(r.value.real)},{fmt(r.value.imag)},{fmt(r.est_abs_error)},{r.method}")
    atomic_write(os.path.join(cfg.out_dir, "erf_table.csv"), "\n".join(lines) + "\n")
    return SolveReport("erf-table", {"points": len(zs)})


RUNNERS = {
    "solve": run_solve,
    "roundtrip": run_roundtrip,
    "converge": run_converge,
    "compare-eq13": run_compare_eq13,
    "erf-table": run_erf_table,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="colehopf", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("config", help="JSON run configuration")
    parser.add_argument("--out-dir", default=None, help="output directory (overrides config out_dir)")
    parser.add_argument("--mode", choices=("derived", "paper-literal"), default=None)
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _fail(code: int, err: dict[str, Any]) -> int:
    sys.stderr.write(json.dumps(err, sort_keys=True, default=str) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_run_config(args.command, args.config, args.out_dir, args.mode)
        os.makedirs(cfg.out_dir, exist_ok=True)
        report = RUNNERS[args.command](cfg)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, exc.to_dict())
    except ColeHopfError as exc:
        return _fail(EXIT_SOLVER, {**exc.to_dict(), "context": {**exc.context, "command": args.command}})
    except OSError as exc:
        return _fail(EXIT_CONFIG, {"code": "io-error", "message": str(exc), "context": {"command": args.command}})
    for name, seconds in sorted(report.timings.items()):
        logger.info("%s: %.3f s", name, seconds)
    return 0


if __name__ == "__main__":
    sys.exit(main())
