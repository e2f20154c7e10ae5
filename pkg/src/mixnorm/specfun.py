"""Gamma/Beta special functions and the Gamma-ratio primitives used by the
series expansions of the ``f_n`` norms.

Everything that can overflow is kept in log space; public quantities are
exponentiated last.  Scalars in, scalars out; numpy arrays are accepted
wherever the docstring says so.
"""

import numpy as np
from scipy import special

from mixnorm.errors import DomainError

# B_{2j} / (2j (2j - 1)), j = 1..7, for the Stirling series of log Gamma.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)
# below this the Stirling difference is not accurate enough; use gammaln directly
_ASYMPTOTIC_MIN = 15.0


def _check_positive(name, x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{name} must be finite and > 0, got {x!r}")
    return arr


def _unwrap(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def log_gamma(x):
    """Return ``ln Gamma(x)`` for ``x > 0`` (scalar or array)."""
    arr = _check_positive("x", x)
    return _unwrap(special.gammaln(arr))


def log_beta(x, y):
    """Return ``ln B(x, y)``."""
    xa = _check_positive("x", x)
    ya = _check_positive("y", y)
    xa, ya = np.broadcast_arrays(xa, ya)
    big, small = np.maximum(xa, ya), np.minimum(xa, ya)
    # ln Gamma(small) - ln(Gamma(big + small) / Gamma(big)); the ratio avoids
    # subtracting two huge log-gammas when big is large
    return _unwrap(special.gammaln(small) - _lgr_minus_clogx(big, small) - small * np.log(big))


def beta(x, y):
    """Euler Beta function ``B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)``.

    >>> round(beta(3, 4) * 60, 12)
    1.0
    """
    return _unwrap(np.exp(log_beta(x, y)))


def _stirling_tail(z):
    z = np.asarray(z, dtype=float)
    inv = 1.0 / z
    inv2 = inv * inv
    acc = np.zeros_like(z)
    for coef in reversed(_STIRLING):
        acc = acc * inv2 + coef
    return acc * inv


def _lgr_minus_clogx(x, c):
    """``ln Gamma(x + c) - ln Gamma(x) - c ln x`` without cancellation.

    Tends to zero like ``c (c - 1) / (2x)``; this is minus the log of the
    Euler-Gauss ratio.
    """
    x = np.asarray(x, dtype=float)
    c = np.asarray(c, dtype=float)
    x, c = np.broadcast_arrays(x, c)
    out = np.empty(x.shape)
    big = (x >= _ASYMPTOTIC_MIN) & (x + c >= _ASYMPTOTIC_MIN)
    if np.any(big):
        xb, cb = x[big], c[big]
        out[big] = (
            (xb + cb - 0.5) * np.log1p(cb / xb)
            - cb
            + (_stirling_tail(xb + cb) - _stirling_tail(xb))
        )
    small = ~big
    if np.any(small):
        xs, cs = x[small], c[small]
        out[small] = special.gammaln(xs + cs) - special.gammaln(xs) - cs * np.log(xs)
    return out


def log_gamma_ratio(x, c):
    """Return ``ln(Gamma(x + c) / Gamma(x))`` for ``x > 0``, ``x + c > 0``.

    ``c`` may be negative.  Accurate for large ``x`` where the naive
    difference of two huge ``gammaln`` values loses digits.
    """
    xa = _check_positive("x", x)
    _check_positive("x + c", np.asarray(x, dtype=float) + np.asarray(c, dtype=float))
    return _unwrap(_lgr_minus_clogx(xa, c) + np.asarray(c, dtype=float) * np.log(xa))


def log_eg_ratio(m, c):
    """Log of the Euler-Gauss ratio ``(m - 1)! m^c / Gamma(m + c)``."""
    ma = _check_positive("m", m)
    if np.any(ma != np.floor(ma)):
        raise DomainError(f"m must be a positive integer, got {m!r}")
    _check_positive("c", c)
    return _unwrap(-_lgr_minus_clogx(ma, c))


def eg_ratio(m, c):
    """Euler-Gauss ratio ``(m - 1)! m^c / Gamma(m + c)``; tends to 1 as m grows.

    >>> eg_ratio(1, 1.0)
    1.0
    """
    return _unwrap(np.exp(log_eg_ratio(m, c)))


def binom_series_coeff(c, k):
    """k-th Taylor coefficient of ``(1 - x)^(-c)``, i.e. ``Gamma(c+k) / (k! Gamma(c))``.

    Uses the product recurrence ``coeff(k) = coeff(k-1) (c + k - 1) / k``.
    """
    _check_positive("c", c)
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    coeff = 1.0
    for j in range(1, int(k) + 1):
        coeff *= (c + j - 1) / j
    return coeff


def binom_series_coeffs(c, count):
    """First ``count`` coefficients of ``(1 - x)^(-c)`` as an array."""
    _check_positive("c", c)
    if count <= 0:
        return np.zeros(0)
    j = np.arange(1, count, dtype=float)
    return np.concatenate(([1.0], np.cumprod((c + j - 1.0) / j)))


def log_binom_series_coeff(c, k):
    """``ln(Gamma(c + k) / (k! Gamma(c)))``; ``k`` may be a float array."""
    _check_positive("c", c)
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise DomainError("k must be nonnegative")
    # small k directly: (k + 1) + (c - 1) would lose a tiny c
    kb = np.maximum(k, 16.0) + 1.0
    big = _lgr_minus_clogx(kb, c - 1.0) + (c - 1.0) * np.log(kb)
    small = special.gammaln(k + c) - special.gammaln(k + 1.0)
    return _unwrap(np.where(k < 16.0, small, big) - special.gammaln(c))


def binomial_coeffs(a, count):
    """Taylor coefficients of ``(1 + x)^a`` for real ``a`` (generalized binomials)."""
    if count <= 0:
        return np.zeros(0)
    j = np.arange(1, count, dtype=float)
    return np.concatenate(([1.0], np.cumprod((a - j + 1.0) / j)))

