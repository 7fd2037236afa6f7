"""SolveReport plus deterministic JSON/CSV/gnuplot writers."""

from __future__ import annotations

import cmath
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCHEMA = "colehopf/1"


def jsonable(value: Any) -> Any:
    """Plain-JSON view: complex -> {re, im}, non-finite -> null, numpy -> Python."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        if not cmath.isfinite(value):
            return None
        return {"re": jsonable(float(value.real)), "im": jsonable(float(value.imag))}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def dumps(data: dict[str, Any]) -> str:
    # json emits repr(float): shortest round-trip, at most 17 significant digits
    return json.dumps({"schema": SCHEMA, **jsonable(data)}, indent=2, sort_keys=True, allow_nan=False) + "\n"


def atomic_write(path: str | os.PathLike[str], text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class SolveReport:
    """Diagnostics of one command.

    ``data`` is what gets serialized; ``timings`` (wall seconds) stay in
    memory so that written reports are byte-identical across runs.
    """

    kind: str
    data: dict[str, Any] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def __getitem__(self, key: str) -> Any:
        return self.data[key]

    def to_json(self) -> str:
        return dumps({"kind": self.kind, **self.data, "warnings": list(self.warnings)})


def dat_table(header: list[str], rows: list[list[float]]) -> str:
    """Whitespace-separated table, gnuplot friendly."""
    lines = ["# " + " ".join(header)]
    for row in rows:
        lines.append(" ".join("nan" if v is None else repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"
