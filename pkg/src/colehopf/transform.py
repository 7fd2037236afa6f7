"""Cole-Hopf chain: velocity psi <-> potential phi <-> heat variable eta.

    phi' = -psi,   eta = exp(phi / 2 eps),   psi = -2 eps eta'/eta

plus the discrete Burgers residual used to check solutions of
``psi_t = eps psi'' - psi psi'``.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import EtaUnderflowError, GridMismatchError, NonpositiveTimestepError, OverflowRiskWarning
from .fields import ComplexField
from .params import ComplexDiffusion, as_diffusion

EXP_LIMIT = 700.0
ETA_FLOOR = 1e-300


def gradient2(f: np.ndarray, h: float) -> np.ndarray:
    """Centered 3-point derivative, one-sided 3-point at the ends."""
    return np.gradient(f, h, edge_order=2 if len(f) >= 3 else 1)


def gradient4(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative: centered 5-point interior, one-sided 5-point ends."""
    n = len(f)
    if n < 5:
        return gradient2(f, h)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    return d


def cumulative_integral(f: np.ndarray, h: float) -> np.ndarray:
    """Left-anchored cumulative trapezoid with the Euler-Maclaurin end correction.

    ``int_a^x f = T(x) - h^2/12 (f'(x) - f'(a)) + O(h^4)``. The prefix sum is
    sequential left to right (``np.cumsum``) and the whole map is linear in f.
    """
    out = np.zeros_like(f)
    if len(f) < 2:
        return out
    out[1:] = np.cumsum(0.5 * h * (f[:-1] + f[1:]))
    if len(f) >= 3:
        df = gradient2(f, h)
        out -= h * h / 12.0 * (df - df[0])
    return out


def potential_from_velocity(psi: ComplexField) -> ComplexField:
    """phi with phi' = -psi and the gauge phi(x_min) = 0."""
    phi = -cumulative_integral(psi.values, psi.grid.spacing)
    return ComplexField(psi.grid, phi, psi.time, "phi")


def eta_from_potential(phi: ComplexField, eps: ComplexDiffusion | complex) -> ComplexField:
    """eta = exp(phi / 2 eps).

    Exponents with real part above 700 are saturated there and an
    :class:`OverflowRiskWarning` is issued; ``info`` records the largest
    ``|phi / 2 eps|`` and the number of saturated nodes.
    """
    eps = as_diffusion(eps).epsilon
    arg = phi.values / (2.0 * eps)
    max_re = float(np.max(arg.real))
    saturated = arg.real > EXP_LIMIT
    if saturated.any():
        warnings.warn(
            f"max Re(phi/2eps) = {max_re:.6g} exceeds {EXP_LIMIT}; eta saturated at "
            f"{int(saturated.sum())} nodes",
            OverflowRiskWarning,
            stacklevel=2,
        )
        arg = np.where(saturated, EXP_LIMIT + 1j * arg.imag, arg)
    with np.errstate(under="ignore"):
        eta = np.exp(arg)
    return ComplexField(
        phi.grid,
        eta,
        phi.time,
        "eta",
        {
            "max_abs_exponent": float(np.max(np.abs(phi.values / (2.0 * eps)))),
            "max_re_exponent": max_re,
            "saturated_nodes": int(saturated.sum()),
        },
    )


def log_eta(values: np.ndarray) -> np.ndarray:
    """Continuous branch of log(eta) along the grid (phase unwrapped node to node)."""
    return np.log(np.abs(values)) + 1j * np.unwrap(np.angle(values))


def velocity_from_eta(
    eta: ComplexField, eps: ComplexDiffusion | complex, eta_floor: float = ETA_FLOOR
) -> ComplexField:
    """psi = -2 eps eta'/eta, taken as -2 eps (log eta)'.

    The log-derivative form is differentiated with fourth-order stencils; it
    is exact when log eta is linear and is blind to constant factors in eta.
    """
    eps = as_diffusion(eps).epsilon
    small = np.abs(eta.values) <= eta_floor
    if small.any():
        idx = int(np.argmax(small))
        raise EtaUnderflowError(
            "|eta| fell below eta_floor; Cole-Hopf inverse is invalid there",
            nodes=int(small.sum()),
            first_x=float(eta.x[idx]),
            eta_floor=eta_floor,
        )
    psi = -2.0 * eps * gradient4(log_eta(eta.values), eta.grid.spacing)
    return ComplexField(eta.grid, psi, eta.time, "psi")


def roundtrip(psi: ComplexField, eps: ComplexDiffusion | complex) -> ComplexField:
    return velocity_from_eta(eta_from_potential(potential_from_velocity(psi), eps), eps)


def burgers_residual(psi_a: ComplexField, psi_b: ComplexField, eps: ComplexDiffusion | complex) -> float:
    """Discrete L2 norm of psi_t - eps psi'' + psi psi' at the time midpoint.

    Second order in space and time; interior nodes only.
    """
    if psi_a.grid != psi_b.grid:
        raise GridMismatchError("fields live on different grids")
    dt = psi_b.time - psi_a.time
    if not dt > 0:
        raise NonpositiveTimestepError("psi_b.time must exceed psi_a.time", dt=dt)
    eps = as_diffusion(eps).epsilon
    h = psi_a.grid.spacing
    a, b = psi_a.values, psi_b.values
    m = 0.5 * (a + b)
    r = (
        (b[1:-1] - a[1:-1]) / dt
        - eps * (m[2:] - 2.0 * m[1:-1] + m[:-2]) / (h * h)
        + m[1:-1] * (m[2:] - m[:-2]) / (2.0 * h)
    )
    return float(np.sqrt(h * np.sum(np.abs(r) ** 2)))
