"""Thomas algorithm for complex tridiagonal systems."""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import SingularTridiagonalError


@njit(cache=True)
def _thomas(lower, diag, upper, rhs, out, work):
    n = diag.shape[0]
    piv = diag[0]
    if piv == 0:
        return 0
    out[0] = rhs[0] / piv
    for i in range(1, n):
        work[i - 1] = upper[i - 1] / piv
        piv = diag[i] - lower[i - 1] * work[i - 1]
        if piv == 0:
            return i
        out[i] = (rhs[i] - lower[i - 1] * out[i - 1]) / piv
    for i in range(n - 2, -1, -1):
        out[i] -= work[i] * out[i + 1]
    return -1


def solve_tridiagonal(lower, diag, upper, rhs):
    """Solve ``A x = rhs`` with sub-diagonal ``lower`` (n-1), ``diag`` (n), ``upper`` (n-1).

    No pivoting; the systems built here are diagonally dominant whenever
    Re(eps) > 0.
    """
    diag = np.ascontiguousarray(diag, dtype=complex)
    n = diag.shape[0]
    lower = np.ascontiguousarray(lower, dtype=complex)
    upper = np.ascontiguousarray(upper, dtype=complex)
    rhs = np.ascontiguousarray(rhs, dtype=complex)
    if lower.shape != (n - 1,) or upper.shape != (n - 1,) or rhs.shape != (n,):
        raise ValueError("tridiagonal operands have inconsistent lengths")
    out = np.empty(n, dtype=complex)
    work = np.empty(max(n - 1, 1), dtype=complex)
    row = _thomas(lower, diag, upper, rhs, out, work)
    if row >= 0:
        raise SingularTridiagonalError("zero pivot in tridiagonal solve", row=int(row))
    return out
