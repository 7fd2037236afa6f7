"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and a ``context`` dict so
the CLI can serialize it as ``{code, message, context}``.
"""

from __future__ import annotations

from typing import Any


class ColeHopfError(Exception):
    code = "error"

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "context": self.context}


class ConfigError(ColeHopfError, ValueError):
    code = "config-parse"


class InvalidRangeError(ConfigError):
    code = "invalid-range"


class TooFewNodesError(ConfigError):
    code = "too-few-nodes"


class GridMismatchError(ColeHopfError, ValueError):
    code = "grid-mismatch"


class NonpositiveTimestepError(ColeHopfError, ValueError):
    code = "nonpositive-dt"


class EtaUnderflowError(ColeHopfError, ArithmeticError):
    code = "eta-underflow"


class OscillatoryDivergenceError(ColeHopfError, ArithmeticError):
    code = "oscillatory-divergence"


class QuadratureNonconvergenceError(ColeHopfError, ArithmeticError):
    code = "quadrature-nonconvergence"


class SingularTridiagonalError(ColeHopfError, ArithmeticError):
    code = "singular-tridiagonal"


class TailConditionError(ColeHopfError, ValueError):
    code = "tail-condition-violated"


class DenominatorUnderflowError(ColeHopfError, ArithmeticError):
    code = "denominator-underflow"


class FormulaSingularityError(ColeHopfError, ZeroDivisionError):
    code = "formula-singularity"


class ErfEvaluationError(ColeHopfError, ArithmeticError):
    code = "erf-evaluation-failure"


class BlowUpError(ColeHopfError, ArithmeticError):
    code = "blow-up"


class InvalidSchemeError(ColeHopfError, ValueError):
    code = "invalid-scheme"


class OverflowRiskWarning(RuntimeWarning):
    """exp(phi / 2 eps) would leave double range; magnitudes were saturated."""
