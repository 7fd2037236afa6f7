"""Heat-equation evolution of eta and the Burgers solution built from it.

eta_t = eps eta'' is advanced either by convolution with the heat kernel
(windowed composite Gauss-Legendre) or by Crank-Nicolson. The Burgers
velocity follows as the ratio of two kernel integrals. For the delta initial
datum psi_0 = N delta the evolution is available in closed form through the
complex error function.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import special
from .errors import (
    ConfigError,
    DenominatorUnderflowError,
    FormulaSingularityError,
    OscillatoryDivergenceError,
    QuadratureNonconvergenceError,
    TailConditionError,
)
from .fields import ComplexField
from .initial import Delta, InitialCondition
from .params import ComplexDiffusion, Grid1D, as_diffusion
from .tridiag import solve_tridiagonal

WINDOW_FACTOR = 8.0
GL_ORDER = 16
QUAD_RTOL = 1e-11
MIN_PANELS = 2
MAX_PANELS = 512
TAIL_PROBE = 1e8
TAIL_TOL = 1e-6
_CHUNK_POINTS = 2_000_000


class SolutionMode(str, enum.Enum):
    """Which form of the ratio-of-integrals solution to evaluate.

    ``derived`` weights the kernel by eta_0 = exp(phi_0 / 2 eps), as the
    Cole-Hopf chain requires. ``paper_literal`` puts psi_0 in the numerator
    and nothing in the denominator, as the formula is usually printed.
    """

    DERIVED = "derived"
    PAPER_LITERAL = "paper_literal"

    @classmethod
    def parse(cls, value: "SolutionMode | str") -> "SolutionMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).replace("-", "_"))
        except ValueError:
            raise ConfigError("mode must be 'derived' or 'paper-literal'", mode=str(value)) from None


def heat_kernel(x, y, t: float, eps: ComplexDiffusion | complex):
    """Unnormalized kernel exp(-(x - y)^2 / (4 eps t)).

    For eps = i hbar / 2m this is exp(i m (x - y)^2 / (2 hbar t)).
    """
    if not t > 0:
        raise ConfigError("t must be positive", t=t)
    eps = as_diffusion(eps).epsilon
    d = np.asarray(x) - np.asarray(y)
    out = np.exp(-(d * d) / (4.0 * eps * t))
    return complex(out) if np.ndim(out) == 0 else out


def _window_half_width(eps: complex, t: float, spacing: float, factor: float) -> float:
    # Re(1/(4 eps t)) = cos(arg eps) / (4 |eps| t): widen so the Gaussian
    # envelope still drops to exp(-factor^2) when eps is complex
    cos_arg = eps.real / abs(eps)
    return max(factor * math.sqrt(4.0 * abs(eps) * t / cos_arg), 10.0 * spacing)


@dataclass
class KernelIntegrals:
    """Scaled kernel integrals at each output point.

    The true values are ``value * exp(shift)``; ``abs_mass`` is the integral
    of the absolute integrand under the same scaling.
    """

    zeroth: np.ndarray
    first: np.ndarray
    abs_mass: np.ndarray
    shift: np.ndarray
    panels: int


def kernel_integrals(
    x: np.ndarray,
    log_weight: Callable[[np.ndarray], np.ndarray],
    t: float,
    eps: complex,
    *,
    breakpoints: Sequence[float] = (),
    half_width: float,
    rtol: float = QUAD_RTOL,
    order: int = GL_ORDER,
    max_panels: int = MAX_PANELS,
) -> KernelIntegrals:
    """int g(y) K dy and int (x - y) g(y) K dy over [x - w, x + w] for each x.

    ``g = exp(log_weight(y))``. Each window is split at the breakpoints it
    contains; every piece gets the same number of Gauss-Legendre panels,
    doubled until both integrals change by less than ``rtol`` times the
    absolute mass.
    """
    x = np.asarray(x, dtype=float)
    inv4et = 1.0 / (4.0 * eps * t)
    gx, gw = np.polynomial.legendre.leggauss(order)
    bps = np.array(sorted(breakpoints), dtype=float)

    lo = x - half_width
    hi = x + half_width
    edges = np.concatenate(
        [lo[:, None], np.clip(np.broadcast_to(bps, (len(x), len(bps))), lo[:, None], hi[:, None]), hi[:, None]],
        axis=1,
    )

    # per-point log shift from a fixed coarse sampling of the window (and the
    # breakpoints), so integrals at every refinement level share one scale
    ys = x[:, None] + half_width * np.linspace(-1.0, 1.0, 129)[None, :]
    ys = np.concatenate([ys, np.clip(np.broadcast_to(bps, (len(x), len(bps))), lo[:, None], hi[:, None])], axis=1)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ex = log_weight(ys) - (x[:, None] - ys) ** 2 * inv4et
    re = np.where(np.isfinite(ex.real), ex.real, -np.inf)
    shift = np.max(re, axis=1)
    shift = np.where(np.isfinite(shift), shift, 0.0)

    def evaluate(panels: int):
        # nodes on [0, 1] for `panels` equal panels
        u = ((np.arange(panels)[:, None] + 0.5 * (gx[None, :] + 1.0)) / panels).ravel()
        wu = np.tile(gw * 0.5 / panels, panels)
        npieces = edges.shape[1] - 1
        m = npieces * len(u)
        chunk = max(1, _CHUNK_POINTS // m)
        z0 = np.empty(len(x), dtype=complex)
        z1 = np.empty(len(x), dtype=complex)
        za = np.empty(len(x))
        for s in range(0, len(x), chunk):
            e = edges[s : s + chunk]
            xs = x[s : s + chunk, None]
            length = e[:, 1:] - e[:, :-1]
            ys = (e[:, :-1, None] + length[:, :, None] * u[None, None, :]).reshape(len(e), -1)
            wts = (length[:, :, None] * wu[None, None, :]).reshape(len(e), -1)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
                f = np.exp(log_weight(ys) - (xs - ys) ** 2 * inv4et - shift[s : s + chunk, None])
            z0[s : s + chunk] = np.sum(wts * f, axis=1)
            z1[s : s + chunk] = np.sum(wts * (xs - ys) * f, axis=1)
            za[s : s + chunk] = np.sum(wts * np.abs(f) * (1.0 + np.abs(xs - ys)), axis=1)
        return z0, z1, za

    panels = MIN_PANELS
    prev = evaluate(panels)
    while True:
        panels *= 2
        cur = evaluate(panels)
        scale = np.maximum(cur[2], np.finfo(float).tiny)
        change = np.maximum(np.abs(cur[0] - prev[0]), np.abs(cur[1] - prev[1])) / scale
        if not np.all(np.isfinite(cur[0])) or not np.all(np.isfinite(cur[1])):
            raise QuadratureNonconvergenceError("non-finite kernel integral", panels=panels)
        if np.max(change) <= rtol:
            break
        if panels >= max_panels:
            raise QuadratureNonconvergenceError(
                "kernel quadrature did not converge", panels=panels, max_rel_change=float(np.max(change))
            )
        prev = cur
    return KernelIntegrals(cur[0], cur[1], cur[2], shift, panels)


def _eta_profile(eta0, eps: complex, breakpoints: Sequence[float]):
    """Normalize the accepted eta_0 inputs to (log_weight, breakpoints)."""
    if isinstance(eta0, InitialCondition):
        return (lambda y: eta0.log_eta0(y, eps)), tuple(eta0.breakpoints) + tuple(breakpoints)
    if isinstance(eta0, ComplexField):
        # tabulated eta: cubic interpolation inside, flat outside
        xs = eta0.grid.nodes
        lo, hi = xs[0], xs[-1]
        vals = eta0.values
        spline = CubicSpline(xs, vals) if eta0.grid.n >= 4 else None

        def log_w(y):
            yc = np.clip(y, lo, hi)
            if spline is not None:
                inside = spline(yc)
            else:
                inside = np.interp(yc, xs, vals.real) + 1j * np.interp(yc, xs, vals.imag)
            return np.log(np.where(y < lo, vals[0], np.where(y > hi, vals[-1], inside)))

        return log_w, (lo, hi) + tuple(breakpoints)
    if callable(eta0):
        return (lambda y: np.log(np.asarray(eta0(y), dtype=complex))), tuple(breakpoints)
    raise TypeError("eta0 must be an InitialCondition, ComplexField or callable")


def _require_diffusive(eps: complex) -> None:
    if eps.real <= 0:
        raise OscillatoryDivergenceError(
            "kernel quadrature needs Re(eps) > 0; add nu_reg or use the closed forms",
            epsilon=[eps.real, eps.imag],
        )


def evolve_heat_quadrature(
    eta0,
    grid: Grid1D,
    t: float,
    eps: ComplexDiffusion | complex,
    *,
    breakpoints: Sequence[float] = (),
    window_factor: float = WINDOW_FACTOR,
    rtol: float = QUAD_RTOL,
) -> ComplexField:
    """eta(x, t) = (4 pi eps t)^(-1/2) int eta_0(y) exp(-(x-y)^2 / 4 eps t) dy.

    ``eta0`` may be an :class:`InitialCondition` (its eta_0 is used), a
    tabulated ``ComplexField`` of eta values (cubic interpolation, flat
    extension) or a callable.
    """
    if not t > 0:
        raise ConfigError("t must be positive", t=t)
    eps = as_diffusion(eps).epsilon
    _require_diffusive(eps)
    log_w, bps = _eta_profile(eta0, eps, breakpoints)
    x = grid.nodes
    w = _window_half_width(eps, t, grid.spacing, window_factor)
    ki = kernel_integrals(x, log_w, t, eps, breakpoints=bps, half_width=w, rtol=rtol)
    norm = 1.0 / np.sqrt(4.0 * np.pi * eps * t + 0j)
    with np.errstate(over="raise"):
        eta = norm * ki.zeroth * np.exp(ki.shift)
    return ComplexField(grid, eta, t, "eta", {"panels": ki.panels, "window_half_width": w})


def evolve_heat_cn(
    eta0: ComplexField,
    t_final: float,
    steps: int,
    eps: ComplexDiffusion | complex,
    *,
    boundary: str = "neumann",
) -> ComplexField:
    """Crank-Nicolson for eta_t = eps eta'' with one tridiagonal solve per step.

    ``boundary="neumann"`` reflects through ghost nodes (zero slope);
    ``"dirichlet"`` holds the two end values fixed.
    """
    if not t_final > 0:
        raise ConfigError("t_final must be positive", t_final=t_final)
    if int(steps) != steps or steps < 1:
        raise ConfigError("steps must be a positive integer", steps=steps)
    if boundary not in ("neumann", "dirichlet"):
        raise ConfigError("boundary must be 'neumann' or 'dirichlet'", boundary=boundary)
    eps = as_diffusion(eps).epsilon
    n = eta0.grid.n
    h = eta0.grid.spacing
    dt = t_final / steps
    r = eps * dt / (h * h)

    # L = second-difference operator; A = I - r/2 L, B = I + r/2 L
    main = np.full(n, -2.0 + 0j)
    up = np.ones(n - 1, dtype=complex)
    lo = np.ones(n - 1, dtype=complex)
    if boundary == "neumann":
        up[0] = 2.0
        lo[-1] = 2.0
    a_main = 1.0 - 0.5 * r * main
    a_up = -0.5 * r * up
    a_lo = -0.5 * r * lo
    if boundary == "dirichlet":
        a_main[0] = a_main[-1] = 1.0
        a_up[0] = 0.0
        a_lo[-1] = 0.0

    u = np.array(eta0.values, dtype=complex)
    rhs = np.empty_like(u)
    for _ in range(int(steps)):
        rhs[1:-1] = u[1:-1] + 0.5 * r * (u[:-2] - 2.0 * u[1:-1] + u[2:])
        if boundary == "neumann":
            rhs[0] = u[0] + r * (u[1] - u[0])
            rhs[-1] = u[-1] + r * (u[-2] - u[-1])
        else:
            rhs[0], rhs[-1] = u[0], u[-1]
        u = solve_tridiagonal(a_lo, a_main, a_up, rhs)
    return ComplexField(eta0.grid, u, eta0.time + t_final, "eta", {"steps": int(steps), "boundary": boundary})


def tail_condition_check(ic, x_probe: float = TAIL_PROBE, *, eps: ComplexDiffusion | complex = 1.0) -> bool:
    """Growth bound |x^-2 int_1^x psi_0| -> 0, probed at +-x_probe and +-2 x_probe.

    True iff on both sides the value at 2 x_probe is no larger than at x_probe
    and below 1e-6. ``ic`` is an InitialCondition or a callable psi_0; for a
    callable the integral uses composite Gauss-Legendre.
    """
    if not x_probe > 1:
        raise ConfigError("x_probe must exceed the anchor a = 1", x_probe=x_probe)

    if isinstance(ic, InitialCondition):
        phi1 = ic.potential(np.array([1.0]), eps)[0]

        def integral(x):
            return -(ic.potential(np.array([x]), eps)[0] - phi1)

    else:
        gx, gw = np.polynomial.legendre.leggauss(GL_ORDER)

        def integral(x):
            edges = np.linspace(1.0, x, 257)
            a, b = edges[:-1, None], edges[1:, None]
            ys = 0.5 * (a + b) + 0.5 * (b - a) * gx[None, :]
            return complex(np.sum(0.5 * (b - a) * gw[None, :] * np.asarray(ic(ys), dtype=complex)))

    for sign in (1.0, -1.0):
        near = abs(integral(sign * x_probe)) / x_probe**2
        far = abs(integral(2.0 * sign * x_probe)) / (2.0 * x_probe) ** 2
        if not (far <= near and far < TAIL_TOL):
            return False
    return True


def solve_burgers_colehopf(
    ic: InitialCondition,
    grid: Grid1D,
    t: float,
    eps: ComplexDiffusion | complex,
    mode: SolutionMode | str = SolutionMode.DERIVED,
    *,
    window_factor: float = WINDOW_FACTOR,
    rtol: float = QUAD_RTOL,
    x_probe: float = TAIL_PROBE,
) -> ComplexField:
    """psi(x, t) as a ratio of heat-kernel integrals.

    derived:        int (x-y)/t eta_0 K dy / int eta_0 K dy,  eta_0 = exp(phi_0 / 2 eps)
    paper_literal:  int (x-y)/t psi_0 K dy / int K dy
    """
    if not t > 0:
        raise ConfigError("t must be positive", t=t)
    mode = SolutionMode.parse(mode)
    eps = as_diffusion(eps).epsilon
    _require_diffusive(eps)
    if not tail_condition_check(ic, x_probe, eps=eps):
        raise TailConditionError("initial data violate the growth bound x^-2 int psi_0 -> 0", x_probe=x_probe)
    x = grid.nodes
    w = _window_half_width(eps, t, grid.spacing, window_factor)
    info = {"mode": mode.value, "window_half_width": w}
    if getattr(ic, "is_zero", False):
        return ComplexField(grid, np.zeros(grid.n, dtype=complex), t, "psi", info)

    if mode is SolutionMode.DERIVED:
        ki = kernel_integrals(
            x, lambda y: ic.log_eta0(y, eps), t, eps, breakpoints=ic.breakpoints, half_width=w, rtol=rtol
        )
        bad = np.abs(ki.zeroth) <= 1e-13 * ki.abs_mass
        if bad.any():
            raise DenominatorUnderflowError(
                "int eta_0 K dy vanishes to rounding", x=[float(v) for v in x[bad][:5]], count=int(bad.sum())
            )
        psi = ki.first / (t * ki.zeroth)
        info["panels"] = ki.panels
        return ComplexField(grid, psi, t, "psi", info)

    if isinstance(ic, Delta):
        # psi_0 = N delta collapses the numerator; int K dy = sqrt(4 pi eps t)
        psi = ic.strength * x / t * heat_kernel(x, 0.0, t, eps) / np.sqrt(4.0 * np.pi * eps * t + 0j)
        info["panels"] = 0
        return ComplexField(grid, psi, t, "psi", info)

    def log_psi0(y):
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(ic.velocity(y, eps), dtype=complex))

    num = kernel_integrals(x, log_psi0, t, eps, breakpoints=ic.breakpoints, half_width=w, rtol=rtol)
    den = kernel_integrals(x, lambda y: np.zeros(np.shape(y), dtype=complex), t, eps, half_width=w, rtol=rtol)
    psi = num.first * np.exp(num.shift - den.shift) / (t * den.zeroth)
    info["panels"] = max(num.panels, den.panels)
    return ComplexField(grid, psi, t, "psi", info)


def _delta_parts(N: float, x, t: float, eps: complex):
    if not t > 0:
        raise ConfigError("t must be positive", t=t)
    x = np.asarray(x, dtype=float)
    root = np.sqrt(4.0 * eps * t + 0j)  # principal branch
    z = x / root
    erf_z = special.erf_values(z)
    q = np.exp(-N / (2.0 * eps))
    eta = 0.5 * (1.0 - erf_z) + q * 0.5 * (1.0 + erf_z)
    return x, z, q, eta


def delta_eta_closed_form(N: float, x, t: float, eps: ComplexDiffusion | complex):
    """Heat evolution of the step eta_0 = 1 (y < 0), exp(-N / 2 eps) (y > 0).

    eta = (1 - erf(z))/2 + exp(-N/2eps) (1 + erf(z))/2,  z = x / sqrt(4 eps t).
    """
    eps = as_diffusion(eps).epsilon
    _, _, _, eta = _delta_parts(N, x, t, eps)
    return complex(eta) if np.ndim(eta) == 0 else eta


def psi_delta_closed_form(N: float, x, t: float, eps: ComplexDiffusion | complex):
    """Burgers velocity for psi_0 = N delta: -2 eps eta_x / eta with eta from the step.

    eta_x = (exp(-N/2eps) - 1) exp(-x^2 / 4 eps t) / sqrt(4 pi eps t).
    """
    eps = as_diffusion(eps).epsilon
    x, z, q, eta = _delta_parts(N, x, t, eps)
    scale = np.maximum(1.0, np.abs(q))
    bad = np.abs(eta) <= 1e-300 * scale
    if np.any(bad):
        xs = np.atleast_1d(x)[np.atleast_1d(bad)]
        raise DenominatorUnderflowError("eta vanishes in the delta solution", x=[float(v) for v in xs[:5]])
    with np.errstate(under="ignore"):
        eta_x = (q - 1.0) * np.exp(-z * z) / np.sqrt(4.0 * np.pi * eps * t + 0j)
    psi = -2.0 * eps * eta_x / eta
    return complex(psi) if np.ndim(psi) == 0 else psi


class ErfConvention(str, enum.Enum):
    STANDARD = "standard"
    PAPER = "paper"


def paper_eq13_terms(N: float, x, t: float, hbar: float, m: float, erf_convention: str = "standard"):
    """Printed delta-solution formula; returns (values, singular_mask).

    psi = sqrt(2i hbar/(m pi t)) exp(i m x^2/(2 hbar t))
          / [2 (exp(-i m N/hbar) - 1)^-1 + (sqrt(pi)/2)(1 - erf(x sqrt(m)/sqrt(2 i hbar t)))]

    with erf standard-normalized or, for ``erf_convention="paper"``, the
    unnormalized integral_0^x exp(-s^2) ds. Singular points hold NaN; N = 0
    returns the zero limit.
    """
    if not t > 0:
        raise ConfigError("t must be positive", t=t)
    conv = ErfConvention(erf_convention)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if N == 0:
        # (exp(0) - 1)^-1 diverges, so the bracket does too: psi -> 0
        return np.zeros(x.shape, dtype=complex), np.zeros(x.shape, dtype=bool)
    e = cmath.exp(-1j * m * N / hbar)
    pref = cmath.sqrt(2j * hbar / (m * math.pi * t))
    phase = np.exp(1j * m * x * x / (2.0 * hbar * t))
    if abs(e - 1.0) <= 1e-12:
        return np.full(x.shape, np.nan + 0j), np.ones(x.shape, dtype=bool)
    z = x * math.sqrt(m) / cmath.sqrt(2j * hbar * t)
    erf_z = special.erf_values(z)
    if conv is ErfConvention.PAPER:
        erf_z = 0.5 * math.sqrt(math.pi) * erf_z
    den = 2.0 / (e - 1.0) + 0.5 * math.sqrt(math.pi) * (1.0 - erf_z)
    singular = np.abs(den) <= 1e-14 * (abs(2.0 / (e - 1.0)) + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(singular, np.nan + 0j, pref * phase / den)
    return vals, singular


def eval_paper_eq13(N: float, x, t: float, hbar: float, m: float, erf_convention: str = "standard"):
    """The printed delta-solution formula, evaluated literally (see :func:`paper_eq13_terms`)."""
    vals, singular = paper_eq13_terms(N, x, t, hbar, m, erf_convention)
    if singular.any():
        raise FormulaSingularityError(
            "formula denominator vanishes (exp(-i m N / hbar) = 1 or zero bracket)",
            N=N,
            hbar=hbar,
            m=m,
            points=int(singular.sum()),
        )
    return complex(vals[0]) if np.ndim(x) == 0 else vals
