"""Complex samples of psi, phi or eta on a uniform grid at a fixed time."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ColeHopfError, ConfigError, GridMismatchError
from .params import Grid1D


class NonFiniteFieldError(ColeHopfError, ValueError):
    code = "non-finite-field"


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Values of one field on ``grid`` at ``time``.

    ``role`` is a free-form tag (``psi``, ``phi``, ``eta``) used for CSV
    headers; ``info`` carries solver diagnostics and never affects numerics.
    """

    grid: Grid1D
    values: np.ndarray
    time: float = 0.0
    role: str = ""
    info: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid.n,):
            raise GridMismatchError(
                "values must have one entry per grid node",
                expected=self.grid.n,
                got=list(values.shape),
            )
        if not np.all(np.isfinite(values)):
            raise NonFiniteFieldError("field contains NaN or Inf", role=self.role)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def with_values(self, values: np.ndarray, *, role: str | None = None, **info: Any) -> "ComplexField":
        return ComplexField(self.grid, values, self.time, self.role if role is None else role, info)

    def to_csv(self) -> str:
        return field_to_csv(self)


def sample(grid: Grid1D, func, time: float = 0.0, role: str = "") -> ComplexField:
    return ComplexField(grid, func(grid.nodes), time, role)


def same_grid(a: ComplexField, b: ComplexField) -> bool:
    return a.grid == b.grid


def fmt(value: float) -> str:
    """Shortest round-trip repr of a float; at most 17 significant digits."""
    return repr(float(value))


def field_to_csv(f: ComplexField) -> str:
    out = io.StringIO()
    out.write(f"# role={f.role or 'field'} t={fmt(f.time)}\n")
    out.write("x,re,im,abs\n")
    for xi, vi in zip(f.x, f.values):
        out.write(f"{fmt(xi)},{fmt(vi.real)},{fmt(vi.imag)},{fmt(abs(vi))}\n")
    return out.getvalue()


def field_from_csv(text: str) -> ComplexField:
    """Parse the format written by :func:`field_to_csv`.

    The grid is reconstructed from the first/last x and the row count; rows
    must be uniformly spaced.
    """
    role, time = "", 0.0
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                key, _, val = token.partition("=")
                if key == "role":
                    role = val
                elif key == "t":
                    time = float(val)
            continue
        if line.startswith("x,"):
            continue
        parts = line.split(",")
        if len(parts) < 3:
            raise ConfigError("CSV rows need x, re, im columns", line=line)
        rows.append([float(p) for p in parts[:3]])
    if len(rows) < 2:
        raise ConfigError("CSV field needs at least 2 rows")
    data = np.array(rows)
    grid = Grid1D(data[0, 0], data[-1, 0], len(rows))
    if not np.allclose(data[:, 0], grid.nodes, rtol=0, atol=1e-9 * max(1.0, grid.length)):
        raise ConfigError("CSV x column is not a uniform grid")
    return ComplexField(grid, data[:, 1] + 1j * data[:, 2], time, role)
