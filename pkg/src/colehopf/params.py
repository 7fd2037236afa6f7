"""Physical parameters, the complex diffusion coefficient and uniform grids."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import ConfigError, InvalidRangeError, TooFewNodesError


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional inputs of the nonlinear Schrödinger equation.

    ``nu_reg`` is an artificial real viscosity added to the purely imaginary
    diffusion ``i hbar / 2m`` so that heat evolution is well posed.
    """

    hbar: float = 1.0
    mass: float = 1.0
    c: float = 1.0
    l: float = 1.0  # noqa: E741
    strength_N: float = 1.0
    nu_reg: float = 0.0

    def __post_init__(self) -> None:
        for name in ("hbar", "mass", "c", "l"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive", field=name, value=value)
        if not np.isfinite(self.strength_N):
            raise ConfigError("strength_N must be finite", field="strength_N")
        if not (np.isfinite(self.nu_reg) and self.nu_reg >= 0):
            raise ConfigError("nu_reg must be nonnegative", field="nu_reg", value=self.nu_reg)


@dataclass(frozen=True)
class ComplexDiffusion:
    epsilon: complex

    def __post_init__(self) -> None:
        eps = complex(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not (np.isfinite(eps.real) and np.isfinite(eps.imag)):
            raise ConfigError("epsilon must be finite", epsilon=str(eps))
        if eps == 0:
            raise ConfigError("epsilon must be nonzero")
        if eps.real < 0:
            raise ConfigError("Re(epsilon) must be nonnegative", epsilon=str(eps))

    @property
    def real(self) -> float:
        return self.epsilon.real

    @property
    def imag(self) -> float:
        return self.epsilon.imag

    def __complex__(self) -> complex:
        return self.epsilon


def as_diffusion(eps: ComplexDiffusion | complex | float) -> ComplexDiffusion:
    if isinstance(eps, ComplexDiffusion):
        return eps
    return ComplexDiffusion(complex(eps))


def epsilon_of(params: PhysicalParams) -> ComplexDiffusion:
    """``nu_reg + i hbar / (2 mass)``; with ``nu_reg = 0`` this is ``i hbar / 2m``."""
    return ComplexDiffusion(complex(params.nu_reg, params.hbar / (2.0 * params.mass)))


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise InvalidRangeError("grid bounds must be finite", x_min=self.x_min, x_max=self.x_max)
        if self.x_min >= self.x_max:
            raise InvalidRangeError(
                "x_min must be smaller than x_max", x_min=self.x_min, x_max=self.x_max
            )
        if int(self.n) != self.n or self.n < 2:
            raise TooFewNodesError("grid needs at least 2 nodes", n=self.n)
        object.__setattr__(self, "n", int(self.n))

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def nodes(self) -> np.ndarray:
        # x_min + i*h per node, not a running sum, so positions are reproducible
        x = self.x_min + np.arange(self.n) * self.spacing
        x[-1] = self.x_max
        return x

    def refined(self, n: int) -> "Grid1D":
        return Grid1D(self.x_min, self.x_max, n)


def make_uniform_grid(x_min: float, x_max: float, n: int) -> Grid1D:
    return Grid1D(float(x_min), float(x_max), n)


_PARAM_KEYS = ("hbar", "mass", "c", "l", "strength_N", "nu_reg")
DEFAULT_GRID = {"x_min": -10.0, "x_max": 10.0, "n": 2048}


def params_from_dict(data: Mapping[str, Any]) -> PhysicalParams:
    kwargs = {}
    for key in _PARAM_KEYS:
        if key in data:
            try:
                kwargs[key] = float(data[key])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key} must be a number", field=key) from exc
    return PhysicalParams(**kwargs)


def grid_from_dict(data: Mapping[str, Any] | None) -> Grid1D:
    values = dict(DEFAULT_GRID)
    if data:
        unknown = set(data) - set(values)
        if unknown:
            raise ConfigError("unknown grid keys", keys=sorted(unknown))
        values.update(data)
    try:
        return make_uniform_grid(float(values["x_min"]), float(values["x_max"]), int(values["n"]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("grid values must be numbers", grid=dict(values)) from exc


def load_params(path: str | os.PathLike[str]) -> tuple[PhysicalParams, Grid1D]:
    """Read ``hbar, mass, c, l, strength_N, nu_reg`` and ``grid`` from JSON."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object", path=str(path))
    return params_from_dict(data), grid_from_dict(data.get("grid"))
