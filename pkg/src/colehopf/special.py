"""Complex error function.

Two regimes with an overlap cross-check: the Maclaurin series, summed in
double-double arithmetic, for ``|z| <= 3`` and a Lentz-evaluated continued
fraction for ``erfc`` when ``|z| > 3`` and ``Re z > 0``. Everything else is
reduced by ``erf(-z) = -erf(z)``.

Along the diagonals ``arg z = ±pi/4`` the series terms reach ``exp(|z|^2)``
while ``erf`` stays O(1); plain double summation loses ~4 digits there, which
is why the series is carried in double-double.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ErfEvaluationError

__all__ = [
    "ErfResult",
    "erf_complex",
    "erf_array",
    "erf_paper_convention",
    "erf_taylor",
    "erf_continued_fraction",
]

TAYLOR_RADIUS = 3.0
PLATEAU_RADIUS = 30.0
TAYLOR_MAX_TERMS = 120
CF_MAX_ITER = 20000
AXIS_WEDGE = 0.5
AXIS_WEDGE_RADIUS = 6.0

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_SQRT_PI = math.sqrt(math.pi)
_EPS = np.finfo(float).eps

METHODS = ("taylor", "continued_fraction", "reflection")
_TAYLOR, _CF, _REFLECT = 0, 1, 2


@dataclass(frozen=True)
class ErfResult:
    value: complex
    est_abs_error: float
    method: str


# -- double-double helpers (error-free transforms, vectorized) ---------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(xh, xl, yh, yl):
    s, e = _two_sum(xh, yh)
    t, f = _two_sum(xl, yl)
    e = e + t
    s, e = _quick_two_sum(s, e)
    e = e + f
    return _quick_two_sum(s, e)


def _dd_mul(xh, xl, yh, yl):
    p, e = _two_prod(xh, yh)
    e = e + (xh * yl + xl * yh)
    return _quick_two_sum(p, e)


def _dd_div_scalar(xh, xl, d):
    q1 = xh / d
    p, e = _two_prod(q1, d)
    s, f = _two_sum(xh, -p)
    f = f - e + xl
    q2 = (s + f) / d
    return _quick_two_sum(q1, q2)


def _series(z: np.ndarray, max_terms: int):
    """Maclaurin sum of erf(z) * sqrt(pi)/2 in double-double.

    Returns (sum, sum of |terms|, index of last term, last |term|).
    """
    a, b = z.real.copy(), z.imag.copy()
    # w = -z^2, exactly representable as a double-double pair per component
    a2 = _two_prod(a, a)
    b2 = _two_prod(b, b)
    wr = _dd_add(-a2[0], -a2[1], b2[0], b2[1])
    ab = _two_prod(a, b)
    wi = (-2.0 * ab[0], -2.0 * ab[1])

    tr = (a, np.zeros_like(a))
    ti = (b, np.zeros_like(b))
    sr = (a.copy(), np.zeros_like(a))
    si = (b.copy(), np.zeros_like(b))
    total_abs = np.abs(z)
    last = np.abs(z)
    active = np.ones(z.shape, dtype=bool)
    n_used = np.zeros(z.shape, dtype=int)
    for n in range(1, max_terms):
        # t <- t * w / n
        rr = _dd_mul(*tr, *wr)
        ii = _dd_mul(*ti, *wi)
        ri = _dd_mul(*tr, *wi)
        ir = _dd_mul(*ti, *wr)
        nr = _dd_add(rr[0], rr[1], -ii[0], -ii[1])
        ni = _dd_add(ri[0], ri[1], ir[0], ir[1])
        tr = _dd_div_scalar(*nr, float(n))
        ti = _dd_div_scalar(*ni, float(n))
        ur = _dd_div_scalar(*tr, float(2 * n + 1))
        ui = _dd_div_scalar(*ti, float(2 * n + 1))
        new_sr = _dd_add(*sr, *ur)
        new_si = _dd_add(*si, *ui)
        sr = (np.where(active, new_sr[0], sr[0]), np.where(active, new_sr[1], sr[1]))
        si = (np.where(active, new_si[0], si[0]), np.where(active, new_si[1], si[1]))
        mag = np.hypot(ur[0], ui[0])
        total_abs = np.where(active, total_abs + mag, total_abs)
        last = np.where(active, mag, last)
        n_used = np.where(active, n, n_used)
        active &= ~(mag < 1e-17 * np.hypot(sr[0], si[0]))
        if not active.any():
            break
    value = (sr[0] + sr[1]) + 1j * (si[0] + si[1])
    return value, total_abs, n_used, last


def erf_taylor(z, max_terms: int = TAYLOR_MAX_TERMS):
    """Series regime, forced regardless of ``|z|``; returns (value, est_abs_error)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    s, total_abs, n_used, last = _series(z, max_terms)
    value = _TWO_OVER_SQRT_PI * s
    # rounding of the double-double sum plus the final conversion, plus truncation
    err = _TWO_OVER_SQRT_PI * (total_abs * 1e-30 + last) + 2 * _EPS * np.abs(value)
    truncated = n_used >= max_terms - 1
    err = np.where(truncated, np.maximum(err, _TWO_OVER_SQRT_PI * last), err)
    return value, err


def erf_continued_fraction(z, max_iter: int = CF_MAX_ITER):
    """``1 - erfc(z)`` with erfc from its even continued fraction (Re z > 0).

    erfc(z) = exp(-z^2)/sqrt(pi) * 2z / (2z^2+1 - 1*2/(2z^2+5 - 3*4/(2z^2+9 - ...)))
    evaluated with the modified Lentz algorithm. Returns (value, est_abs_error).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    tiny = 1e-300
    z2 = z * z
    f = 2.0 * z2 + 1.0
    f = np.where(f == 0, tiny, f)
    C = f.copy()
    D = np.zeros_like(f)
    delta = np.full(z.shape, np.inf, dtype=complex)
    active = np.ones(z.shape, dtype=bool)
    for n in range(1, max_iter):
        a = -float((2 * n - 1) * (2 * n))
        b = 2.0 * z2 + (4 * n + 1)
        Dn = b + a * D
        Dn = np.where(Dn == 0, tiny, Dn)
        Cn = b + a / C
        Cn = np.where(Cn == 0, tiny, Cn)
        Dn = 1.0 / Dn
        d = Cn * Dn
        f = np.where(active, f * d, f)
        C = np.where(active, Cn, C)
        D = np.where(active, Dn, D)
        delta = np.where(active, d, delta)
        active &= ~(np.abs(d - 1.0) < 1e-16)
        if not active.any():
            break
    with np.errstate(over="ignore", invalid="ignore"):
        erfc = np.exp(-z2) / _SQRT_PI * 2.0 * z / f
    value = 1.0 - erfc
    rel = np.abs(delta - 1.0)
    err = np.abs(erfc) * (rel + 16 * _EPS) + 2 * _EPS * np.abs(value)
    return value, err


def erf_array(z):
    """Vectorized erf; returns (values, est_abs_errors, method_codes).

    Method codes index :data:`METHODS`.
    """
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    flip = z.real < 0
    w = np.where(flip, -z, z)
    r = np.abs(w)
    value = np.empty_like(w)
    err = np.empty(w.shape)
    method = np.empty(w.shape, dtype=int)

    small = r <= TAYLOR_RADIUS
    # Near the imaginary axis the continued fraction converges arbitrarily
    # slowly (it diverges at Re z = 0) while the series has little
    # cancellation (relative rounding ~ eps * exp((Re z)^2)).
    wedge = (~small) & (w.real <= AXIS_WEDGE) & (r <= AXIS_WEDGE_RADIUS)
    axis = (~small) & (~wedge) & (w.real == 0)
    plateau = (~small) & (~wedge) & (~axis) & (r > PLATEAU_RADIUS) & (np.abs(np.angle(w)) < np.pi / 4)
    cf = (~small) & (~wedge) & (~axis) & (~plateau)

    series = small | wedge
    if series.any():
        value[series], err[series] = erf_taylor(w[series])
        method[series] = _TAYLOR
    if axis.any():
        # erf(iy) = i erfi(y); needs ~e*y^2 terms, overflows near y = 26.6
        wa = w[axis]
        n_terms = int(np.e * np.max(np.abs(wa)) ** 2) + 60
        with np.errstate(over="ignore", invalid="ignore"):
            value[axis], err[axis] = erf_taylor(wa, max_terms=n_terms)
        method[axis] = _TAYLOR
    if cf.any():
        value[cf], err[cf] = erf_continued_fraction(w[cf])
        method[cf] = _CF
    if plateau.any():
        wp = w[plateau]
        value[plateau] = 1.0
        with np.errstate(under="ignore"):
            err[plateau] = np.exp(-(wp * wp).real) / (_SQRT_PI * np.abs(wp))
        method[plateau] = _REFLECT

    value = np.where(flip, -value, value)
    method = np.where(flip & (method != _REFLECT), _REFLECT, method)
    return value.reshape(shape), err.reshape(shape), method.reshape(shape)


def erf_values(z):
    """erf(z) for arrays; raises ErfEvaluationError on non-finite output."""
    value, _, _ = erf_array(z)
    if not np.all(np.isfinite(value)):
        bad = np.asarray(z, dtype=complex)[~np.isfinite(value)]
        raise ErfEvaluationError(
            "erf overflowed for extreme complex argument", z=str(complex(bad.ravel()[0]))
        )
    return value


def erf_complex(z: complex) -> ErfResult:
    """Standard-normalized erf(z) = 2/sqrt(pi) * integral_0^z exp(-s^2) ds."""
    value, err, method = erf_array(np.array([complex(z)]))
    v = complex(value[0])
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise ErfEvaluationError("erf overflowed for extreme complex argument", z=str(complex(z)))
    return ErfResult(v, float(err[0]), METHODS[int(method[0])])


def erf_paper_convention(z):
    """Unnormalized integral_0^z exp(-s^2) ds = (sqrt(pi)/2) erf(z)."""
    if np.ndim(z) == 0:
        return 0.5 * _SQRT_PI * erf_complex(complex(z)).value
    return 0.5 * _SQRT_PI * erf_values(z)
