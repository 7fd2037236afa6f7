"""Initial data psi_0 for the Burgers problem.

Each kind provides the velocity psi_0(x), the potential phi_0 with
phi_0' = -psi_0, and log eta_0 = phi_0 / (2 eps). Analytic kinds use the gauge
phi_0(0) = 0; tabulated samples anchor at the left end of their grid.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import erf as real_erf

from .errors import ConfigError
from .fields import ComplexField, field_from_csv
from .params import ComplexDiffusion, as_diffusion
from .transform import potential_from_velocity


class InitialCondition:
    kind: str = ""
    breakpoints: tuple[float, ...] = ()

    def velocity(self, x, eps: ComplexDiffusion | complex) -> np.ndarray:
        raise NotImplementedError

    def potential(self, x, eps: ComplexDiffusion | complex) -> np.ndarray:
        raise NotImplementedError

    def log_eta0(self, x, eps: ComplexDiffusion | complex) -> np.ndarray:
        return self.potential(x, eps) / (2.0 * as_diffusion(eps).epsilon)

    def eta0(self, x, eps: ComplexDiffusion | complex) -> np.ndarray:
        return np.exp(self.log_eta0(x, eps))

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError

    @property
    def is_zero(self) -> bool:
        """True when psi_0 vanishes identically (so eta stays exactly 1)."""
        return False


@dataclass(frozen=True)
class Delta(InitialCondition):
    """psi_0 = N delta(x); symbolic, never sampled on a grid."""

    strength: float = 1.0
    kind = "delta"
    breakpoints = (0.0,)

    def velocity(self, x, eps=None):
        raise ValueError("delta initial data cannot be sampled pointwise")

    def potential(self, x, eps=None):
        # phi jumps down by N across the origin; H(0) = 1/2
        x = np.asarray(x, dtype=float)
        return -self.strength * np.where(x > 0, 1.0, np.where(x < 0, 0.0, 0.5)) + 0j

    def to_dict(self):
        return {"kind": self.kind, "strength_N": self.strength}

    @property
    def is_zero(self):
        return self.strength == 0


@dataclass(frozen=True)
class Gaussian(InitialCondition):
    """psi_0 = amplitude * exp(-(x - center)^2 / (2 width^2))."""

    amplitude: float = 1.0
    center: float = 0.0
    width: float = 1.0
    kind = "gaussian"

    def __post_init__(self) -> None:
        if not self.width > 0:
            raise ConfigError("gaussian width must be positive", width=self.width)

    @classmethod
    def with_mass(cls, mass: float, width: float, center: float = 0.0) -> "Gaussian":
        """Mollified delta: total integral ``mass``."""
        return cls(mass / (width * math.sqrt(2.0 * math.pi)), center, width)

    @property
    def mass(self) -> float:
        return self.amplitude * self.width * math.sqrt(2.0 * math.pi)

    def velocity(self, x, eps=None):
        x = np.asarray(x, dtype=float)
        return self.amplitude * np.exp(-0.5 * ((x - self.center) / self.width) ** 2) + 0j

    def potential(self, x, eps=None):
        x = np.asarray(x, dtype=float)
        s = math.sqrt(2.0) * self.width
        scale = self.amplitude * self.width * math.sqrt(math.pi / 2.0)
        return -scale * (real_erf((x - self.center) / s) - real_erf(-self.center / s)) + 0j

    def to_dict(self):
        return {"kind": self.kind, "amplitude": self.amplitude, "center": self.center, "width": self.width}

    @property
    def is_zero(self):
        return self.amplitude == 0


@dataclass(frozen=True)
class TanhFront(InitialCondition):
    """psi_0 = -2 eps k / (1 + exp(-k x)) = -eps k (1 + tanh(k x / 2)).

    This is the t = 0 slice of the exact front built from eta = 1 + exp(kx + eps k^2 t),
    so eta_0 = (1 + exp(k x)) / 2 does not depend on eps.
    """

    k: float = 1.0
    kind = "tanh_front"

    def velocity(self, x, eps):
        eps = as_diffusion(eps).epsilon
        x = np.asarray(x, dtype=float)
        return -eps * self.k * (1.0 + np.tanh(0.5 * self.k * x))

    def potential(self, x, eps):
        eps = as_diffusion(eps).epsilon
        return 2.0 * eps * self.log_eta0(x, eps)

    def log_eta0(self, x, eps=None):
        x = np.asarray(x, dtype=float)
        return np.logaddexp(0.0, self.k * x) - math.log(2.0) + 0j

    def to_dict(self):
        return {"kind": self.kind, "k": self.k}

    @property
    def is_zero(self):
        return self.k == 0


class Samples(InitialCondition):
    """Tabulated psi_0 on a grid.

    Interpolated with cubic splines inside the grid and extended by the edge
    values outside it (flat tails), so the potential continues linearly.
    """

    kind = "samples"

    def __init__(self, field: ComplexField) -> None:
        self.field = field
        x = field.x
        self._lo, self._hi = float(x[0]), float(x[-1])
        self.breakpoints = (self._lo, self._hi)
        psi = field.values
        phi = potential_from_velocity(field).values
        self._psi_edges = (psi[0], psi[-1])
        self._phi_edges = (phi[0], phi[-1])
        n = len(x)
        self._psi = CubicSpline(x, psi) if n >= 4 else None
        self._phi = CubicSpline(x, phi) if n >= 4 else None
        self._x, self._psi_raw, self._phi_raw = x, psi, phi

    def _interp(self, spline, raw, x):
        if spline is not None:
            return spline(x)
        return np.interp(x, self._x, raw.real) + 1j * np.interp(x, self._x, raw.imag)

    def velocity(self, x, eps=None):
        x = np.asarray(x, dtype=float)
        inside = self._interp(self._psi, self._psi_raw, np.clip(x, self._lo, self._hi))
        return np.where(x < self._lo, self._psi_edges[0], np.where(x > self._hi, self._psi_edges[1], inside))

    def potential(self, x, eps=None):
        x = np.asarray(x, dtype=float)
        inside = self._interp(self._phi, self._phi_raw, np.clip(x, self._lo, self._hi))
        left = self._phi_edges[0] - self._psi_edges[0] * (x - self._lo)
        right = self._phi_edges[1] - self._psi_edges[1] * (x - self._hi)
        return np.where(x < self._lo, left, np.where(x > self._hi, right, inside))

    def to_dict(self):
        return {"kind": self.kind, "n": self.field.grid.n}

    @property
    def is_zero(self):
        return not np.any(self.field.values)


def ic_from_dict(data: Mapping[str, Any], base_dir: str | None = None) -> InitialCondition:
    """Build an initial condition from its JSON description.

    ``{"kind": "delta", "strength_N": 1}``, ``{"kind": "gaussian", "amplitude", "center",
    "width"}`` (or ``"mass"`` instead of ``"amplitude"``), ``{"kind": "tanh_front", "k"}``,
    ``{"kind": "samples", "csv": "path.csv"}``.
    """
    if not isinstance(data, Mapping) or "kind" not in data:
        raise ConfigError("initial condition needs a 'kind'")
    kind = data["kind"]
    try:
        if kind == "delta":
            return Delta(float(data.get("strength_N", data.get("N", 1.0))))
        if kind == "gaussian":
            width = float(data.get("width", 1.0))
            center = float(data.get("center", 0.0))
            if "mass" in data:
                return Gaussian.with_mass(float(data["mass"]), width, center)
            return Gaussian(float(data.get("amplitude", 1.0)), center, width)
        if kind == "tanh_front":
            return TanhFront(float(data.get("k", 1.0)))
        if kind == "samples":
            path = data["csv"]
            if base_dir and not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            with open(path, encoding="utf-8") as fh:
                return Samples(field_from_csv(fh.read()))
    except (TypeError, KeyError, ValueError, OSError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad {kind!r} initial condition: {exc}", ic=dict(data)) from exc
    raise ConfigError(f"unknown initial condition kind {kind!r}", kind=str(kind))
