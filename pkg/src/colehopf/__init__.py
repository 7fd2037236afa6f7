"""Burgers / nonlinear Schrödinger solutions through the Cole-Hopf transformation."""

from .errors import ColeHopfError
from .fields import ComplexField, field_from_csv, field_to_csv, sample
from .heat import (
    SolutionMode,
    delta_eta_closed_form,
    eval_paper_eq13,
    evolve_heat_cn,
    evolve_heat_quadrature,
    heat_kernel,
    psi_delta_closed_form,
    solve_burgers_colehopf,
    tail_condition_check,
)
from .initial import Delta, Gaussian, InitialCondition, Samples, TanhFront
from .oracle import FDConfig, convergence_study, solve_burgers_fd, traveling_front_exact
from .params import ComplexDiffusion, Grid1D, PhysicalParams, epsilon_of, make_uniform_grid
from .special import ErfResult, erf_complex, erf_paper_convention
from .transform import (
    burgers_residual,
    eta_from_potential,
    potential_from_velocity,
    roundtrip,
    velocity_from_eta,
)

__version__ = "0.1.0"

__all__ = [
    "ColeHopfError",
    "ComplexDiffusion",
    "ComplexField",
    "Delta",
    "ErfResult",
    "FDConfig",
    "Gaussian",
    "Grid1D",
    "InitialCondition",
    "PhysicalParams",
    "Samples",
    "SolutionMode",
    "TanhFront",
    "burgers_residual",
    "convergence_study",
    "delta_eta_closed_form",
    "epsilon_of",
    "erf_complex",
    "erf_paper_convention",
    "eta_from_potential",
    "eval_paper_eq13",
    "evolve_heat_cn",
    "evolve_heat_quadrature",
    "field_from_csv",
    "field_to_csv",
    "heat_kernel",
    "make_uniform_grid",
    "potential_from_velocity",
    "psi_delta_closed_form",
    "roundtrip",
    "sample",
    "solve_burgers_colehopf",
    "solve_burgers_fd",
    "tail_condition_check",
    "traveling_front_exact",
    "velocity_from_eta",
]
