"""Analytic test functions on the unit disk and their integral means.

Four families are supported: polynomials, monomials ``z^k``, binomial powers
``(1 + z^2)^a`` and the negative binomials ``f_n(z) = (1 - z^{2n})^{-2 gamma}``.
Every family is lacunary, ``f(z) = g(z^m)``, and the integral means are
computed for ``g`` on the circle of radius ``rho^m`` (the map
``theta -> m theta`` preserves normalized arc length).

Circle quadrature:

* polynomials, even integer ``p``: Parseval sum for ``f^{p/2}``, exact;
* polynomials, finite ``p``: periodic trapezoidal rule via FFT, doubling the
  sample count until the relative change drops below ``rel_tol``;
* binomial powers and ``f_n``: ``|g|^p = |1 - R e^{i theta}|^t`` has a near
  singularity of width ``1 - R`` at one point, so the mean is integrated on a
  ``sinh``-graded Gauss-Legendre grid that resolves it at every radius;
* ``p = inf``: dense sampling (4096 points) plus golden-section refinement
  around the best sample.

Internally radii travel together with ``1 - rho`` so that radii within a few
ulps of 1 keep their distance to the boundary.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from mixnorm.errors import DomainError, MixnormError, NonConvergenceError
from mixnorm.specfun import binom_series_coeffs, binomial_coeffs

INF = math.inf

DEFAULT_REL_TOL = 1e-11
DEFAULT_MAX_SAMPLES = 2**20
DEFAULT_TRUNCATION = 4096
SUP_SAMPLES = 4096

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_GL_ORDER = 10
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)
# smallest grading scale for the sinh map; below it the kernel is |theta|^t
_SIGMA_FLOOR = 1e-30
# even p up to this use Parseval on the coefficients of f^{p/2}
_MAX_EVEN_POWER = 16


def check_exponent(p, name="p"):
    """Validate an extended exponent: a positive real or ``inf``."""
    try:
        value = float(p)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a positive real or inf, got {p!r}") from None
    if math.isnan(value) or value <= 0:
        raise DomainError(f"{name} must be a positive real or inf, got {p!r}")
    return value


def parse_exponent(text):
    """Parse an exponent literal; ``inf`` is the only spelling of infinity."""
    text = text.strip()
    if text == "inf":
        return INF
    if not re.fullmatch(r"[+]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?", text):
        raise DomainError(f"malformed exponent {text!r}")
    value = float(text)
    if math.isinf(value):
        raise DomainError(f"exponent {text!r} overflows; write 'inf' for infinity")
    return check_exponent(value)


def format_exponent(p):
    """Inverse of :func:`parse_exponent` for JSON/CSV output."""
    return "inf" if p == INF else float(p)


@dataclass(frozen=True)
class MeanResult:
    value: float
    abs_error_estimate: float
    n_samples: int


def _format_number(x):
    x = complex(x)
    if x.imag == 0:
        return repr(x.real)
    return f"{x.real!r}{x.imag:+}j"


class _Family:
    """Shared behaviour of the function families."""

    truncation_order: int

    def eval(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1.0):
            raise DomainError("evaluation point outside the closed unit disk")
        out = self._eval(z)
        return complex(out) if out.ndim == 0 else out

    def series_eval(self, z, order=None):
        """Evaluate the truncated Taylor series (not the closed form)."""
        coeffs = self.coefficients(order)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), coeffs)

    @property
    def is_constant(self):
        return False

    def __str__(self):
        return self.literal()


@dataclass(frozen=True)
class Polynomial(_Family):
    """``a_0 + a_1 z + ... + a_d z^d`` with complex coefficients, low to high."""

    coeffs: tuple
    truncation_order: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        if not coeffs:
            raise DomainError("polynomial needs at least one coefficient")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
            raise DomainError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    def _eval(self, z):
        return np.polynomial.polynomial.polyval(z, np.array(self.coeffs))

    def coefficients(self, count=None):
        count = self.truncation_order if count is None else count
        out = np.zeros(count, dtype=complex)
        n = min(count, len(self.coeffs))
        out[:n] = self.coeffs[:n]
        return out

    @property
    def is_constant(self):
        return all(c == 0 for c in self.coeffs[1:])

    def literal(self):
        return "poly:" + ",".join(_format_number(c) for c in self.coeffs)

    def _reduced(self):
        return 1, np.array(self.coeffs)


@dataclass(frozen=True)
class Monomial(_Family):
    """``z^k``."""

    k: int
    truncation_order: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(f"monomial exponent must be a nonnegative integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    def _eval(self, z):
        return z**self.k

    def coefficients(self, count=None):
        count = self.truncation_order if count is None else count
        out = np.zeros(count, dtype=complex)
        if self.k < count:
            out[self.k] = 1.0
        return out

    @property
    def is_constant(self):
        return self.k == 0

    def literal(self):
        return f"mono:{self.k}"

    def _reduced(self):
        if self.k == 0:
            return 1, np.array([1.0 + 0j])
        return self.k, np.array([0j, 1.0 + 0j])


@dataclass(frozen=True)
class BinomialPower(_Family):
    """``(1 + z^2)^a`` on the principal branch."""

    a: float
    truncation_order: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"binomial power exponent must be > 0, got {self.a!r}")

    def _eval(self, z):
        return (1.0 + z * z) ** self.a

    def coefficients(self, count=None):
        count = self.truncation_order if count is None else count
        out = np.zeros(count, dtype=complex)
        half = binomial_coeffs(self.a, (count + 1) // 2)
        out[::2] = half[: len(out[::2])]
        return out

    def coefficient_tail_bound(self, r, count=None):
        """Bound on ``sum_{k >= count} |c_k| r^k`` for ``0 <= r < 1``."""
        count = self.truncation_order if count is None else count
        first = (count + 1) // 2
        j0 = max(first, math.ceil((self.a - 1.0) / 2.0))
        x = r * r
        tail = 0.0
        coeffs = binomial_coeffs(self.a, j0 + 1)
        for j in range(first, j0):
            tail += abs(coeffs[j]) * x**j
        # |C(a, j + 1) / C(a, j)| <= 1 once j >= (a - 1) / 2
        return tail + abs(coeffs[j0]) * x**j0 / (1.0 - x)

    def literal(self):
        return f"binpow:{self.a!r}"

    def _kernel(self):
        return self.a


@dataclass(frozen=True)
class NegBinomial(_Family):
    """``f_n(z) = (1 - z^{2n})^{-2 gamma}``."""

    n: int
    gamma: float
    truncation_order: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise DomainError(f"gamma must be > 0, got {self.gamma!r}")

    def _eval(self, z):
        w = z ** (2 * self.n)
        if np.any(w == 1.0):
            raise DomainError("f_n has a singularity at this point")
        return (1.0 - w) ** (-2.0 * self.gamma)

    def coefficients(self, count=None):
        count = self.truncation_order if count is None else count
        out = np.zeros(count, dtype=complex)
        step = 2 * self.n
        k = (count - 1) // step + 1
        out[::step] = binom_series_coeffs(2.0 * self.gamma, k)
        return out

    def coefficient_tail_bound(self, r, count=None):
        """Bound on ``sum_{j >= count} |c_j| r^j`` for ``0 <= r < 1``."""
        count = self.truncation_order if count is None else count
        step = 2 * self.n
        k0 = (count - 1) // step + 1
        c = 2.0 * self.gamma
        x = r**step
        term = binom_series_coeffs(c, k0 + 1)[k0] * x**k0
        ratio = max(1.0, (c + k0) / (k0 + 1.0)) * x
        if ratio >= 1.0:
            return INF
        return term / (1.0 - ratio)

    def literal(self):
        return f"fnseq:n={self.n},gamma={self.gamma!r}"

    def _kernel(self):
        return -2.0 * self.gamma


def boundary_scale(f):
    """A ``1 - r`` below which ``M_p(sqrt(r); f)`` has no further structure.

    Lacunary families ``g(z^m)`` vary on the scale ``1/m``; a polynomial also
    changes behaviour at the moduli of its zeros near the unit circle.
    """
    if isinstance(f, Polynomial):
        coeffs = np.array(f.coeffs)
        nz = np.flatnonzero(coeffs)
        coeffs = coeffs[: nz[-1] + 1] if nz.size else coeffs[:1]
        deg = len(coeffs) - 1
        scale = 1.0 / max(deg, 1)
        if deg >= 1:
            roots = np.roots(coeffs[::-1])
            gaps = np.abs(1.0 - np.abs(roots) ** 2)
            gaps = gaps[gaps > 0]
            if gaps.size:
                scale = min(scale, float(np.min(gaps)))
        return max(0.01 * scale, 1e-12)
    if isinstance(f, Monomial):
        return 0.01 / max(f.k, 1)
    if isinstance(f, BinomialPower):
        return 0.005
    if isinstance(f, NegBinomial):
        return 0.005 / f.n
    raise MixnormError(f"unsupported function {f!r}")


def constant_one():
    return Polynomial((1.0,))


_FLOAT = r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?"


def parse_function(text):
    """Parse a function literal.

    ``poly:1,0,2`` (coefficients low to high; complex like ``1+2j`` allowed),
    ``mono:4``, ``binpow:1.5``, ``fnseq:n=3,gamma=0.25``.
    """
    kind, sep, body = text.strip().partition(":")
    if not sep or not body:
        raise DomainError(f"malformed function literal {text!r}")
    try:
        if kind == "poly":
            return Polynomial(tuple(complex(tok.strip()) for tok in body.split(",")))
        if kind == "mono":
            if not body.strip().isdigit():
                raise ValueError(body)
            return Monomial(int(body))
        if kind == "binpow":
            if not re.fullmatch(_FLOAT, body.strip()):
                raise ValueError(body)
            return BinomialPower(float(body))
        if kind == "fnseq":
            fields = dict(item.split("=", 1) for item in body.split(","))
            if set(fields) != {"n", "gamma"} or not fields["n"].strip().isdigit():
                raise ValueError(body)
            if not re.fullmatch(_FLOAT, fields["gamma"].strip()):
                raise ValueError(body)
            return NegBinomial(int(fields["n"]), float(fields["gamma"]))
    except (ValueError, TypeError):
        raise DomainError(f"malformed function literal {text!r}") from None
    raise DomainError(f"unknown function family {kind!r}")


# -- circle quadrature ---------------------------------------------------------


def _reduced_radius(rho, eps, m):
    """``R = rho^m`` and ``1 - R`` computed from ``1 - rho`` without cancellation."""
    if m == 1:
        return rho, eps
    with np.errstate(divide="ignore"):
        log_r = m * np.log1p(-eps)
    return np.exp(log_r), -np.expm1(log_r)


def _poly_values(b, n):
    """Values of ``sum_j b[:, j] e^{i j theta_k}`` at ``n`` equispaced angles."""
    return np.fft.ifft(b, n=n, axis=1) * n


def _poly_trapezoid(coeffs, R, p, rel_tol, max_samples):
    deg = len(coeffs) - 1
    powers = R[:, None] ** np.arange(deg + 1)
    b = coeffs[None, :] * powers
    n = 32
    while n < 4 * (deg + 1):
        n *= 2
    means = np.zeros(len(R))
    errs = np.full(len(R), INF)
    samples = np.zeros(len(R), dtype=int)
    todo = np.arange(len(R))
    coarse = np.mean(np.abs(_poly_values(b, n)) ** p, axis=1)
    while todo.size and 2 * n <= max_samples:
        n *= 2
        fine = np.mean(np.abs(_poly_values(b[todo], n)) ** p, axis=1)
        change = np.abs(fine - coarse)
        means[todo] = fine
        errs[todo] = change
        samples[todo] = n
        done = change <= rel_tol * fine + 1e-300
        todo = todo[~done]
        coarse = fine[~done]
    return means, errs, samples, todo.size == 0


def _kernel_power(R, eps, theta, t):
    # |1 - R e^{i theta}|^t, with |.|^2 = (1 - R)^2 + 4 R sin^2(theta / 2)
    s = np.sin(0.5 * theta)
    return (eps * eps + 4.0 * R * s * s) ** (0.5 * t)


def _kernel_graded(R, eps, t, rel_tol, max_panels=2**14):
    """Mean of ``|1 - R e^{i theta}|^t`` over the circle, one value per radius.

    Substitutes ``theta = sigma sinh(u)`` with ``sigma`` the width of the near
    singularity at ``theta = 0`` and integrates ``u`` over ``[0, asinh(pi/sigma)]``
    by composite Gauss-Legendre, doubling the panel count until converged.
    """
    root = np.sqrt(np.maximum(R, 1e-300))
    sigma = np.clip(eps / root, _SIGMA_FLOOR, 1.0)
    upper = np.arcsinh(math.pi / sigma)
    panels = int(max(4, math.ceil(float(np.max(upper)))))

    def rule(count):
        h = upper / count
        k = np.arange(count)
        # nodes: (nrad, count * order)
        mid = (k[None, :, None] + 0.5) * h[:, None, None]
        u = mid + 0.5 * h[:, None, None] * _GL_NODES[None, None, :]
        u = u.reshape(len(R), -1)
        theta = sigma[:, None] * np.sinh(u)
        dtheta = sigma[:, None] * np.cosh(u)
        w = np.tile(0.5 * _GL_WEIGHTS, count)[None, :] * h[:, None]
        vals = _kernel_power(R[:, None], eps[:, None], theta, t) * dtheta
        return np.sum(vals * w, axis=1) / math.pi

    coarse = rule(panels)
    while True:
        panels *= 2
        fine = rule(panels)
        change = np.abs(fine - coarse)
        if np.all(change <= rel_tol * np.abs(fine) + 1e-300) or panels >= max_panels:
            converged = bool(np.all(change <= rel_tol * np.abs(fine) + 1e-300))
            return fine, change, panels * _GL_ORDER, converged
        coarse = fine


def _golden_max(func, lo, hi, iterations=80, rel_tol=0.0):
    """Vectorized golden-section maximization of ``func`` on ``[lo, hi]`` row-wise.

    Stops early once the two interior values agree to ``rel_tol`` in every
    row.  Returns ``(maxima, spread)`` with ``spread`` the final disagreement.
    """
    a, b = lo.copy(), hi.copy()
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(iterations):
        if rel_tol and np.all(np.abs(fc - fd) <= rel_tol * np.maximum(fc, fd)):
            break
        left = fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _GOLDEN * (b - a)
        new_d = a + _GOLDEN * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        f_new = func(np.where(left, new_c, new_d))
        fc_next = np.where(left, f_new, fd)
        fd_next = np.where(left, fc, f_new)
        c, d, fc, fd = c_next, d_next, fc_next, fd_next
    return np.maximum(fc, fd), np.abs(fc - fd)


def _sup_circle(modsq_grid, modsq_at, nrad, rel_tol, samples=SUP_SAMPLES):
    """Max of ``|g|`` on the circle: dense sampling then golden refinement.

    ``modsq_grid(n)`` returns ``|g|^2`` on ``n`` equispaced angles, shape
    ``(nrad, n)``; ``modsq_at(theta)`` evaluates ``|g|^2`` row-wise.
    """
    grid = modsq_grid(samples)
    best = np.argmax(grid, axis=1)
    sampled = grid[np.arange(nrad), best]
    h = 2.0 * math.pi / samples
    theta0 = best * h
    # |g|^2 is flat to second order at the peak, so its spread shrinks fast
    refined, spread = _golden_max(modsq_at, theta0 - h, theta0 + h, 80, 0.5 * rel_tol)
    peak = np.maximum(sampled, refined)
    value = np.sqrt(peak)
    # d|g| = d|g|^2 / (2|g|); a zero peak means g vanishes on the circle
    safe = np.where(peak > 0, peak, 1.0)
    return value, np.where(peak > 0, 0.5 * value * spread / safe, 0.0) + 1e-15 * value


def _even_power_weights(coeffs, p):
    """``|c_k|^2`` for the coefficients of ``g^{p/2}`` (even integer ``p``)."""
    power = np.array([1.0 + 0j])
    for _ in range(int(p) // 2):
        power = np.convolve(power, coeffs)
    return np.abs(power) ** 2


def _means(f, p, rho, eps, rel_tol=DEFAULT_REL_TOL, max_samples=DEFAULT_MAX_SAMPLES):
    """Integral means ``M_p(rho; f)`` for arrays ``rho`` with ``eps = 1 - rho``.

    Returns ``(values, abs_errors, n_samples, converged)``.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    eps = np.atleast_1d(np.asarray(eps, dtype=float))
    nrad = len(rho)
    if isinstance(f, (Polynomial, Monomial)):
        m, coeffs = f._reduced()
        R, _ = _reduced_radius(rho, eps, m)
        scale = float(np.max(np.abs(coeffs)))
        if len(coeffs) == 1 or scale == 0.0:
            value = np.full(nrad, abs(coeffs[0]))
            return value, np.zeros(nrad), np.ones(nrad, dtype=int), True
        # normalized so that |g|^p can neither underflow nor overflow
        coeffs = coeffs / scale
        if p != INF and p == int(p) and int(p) % 2 == 0 and p <= _MAX_EVEN_POWER:
            # |g|^p = |g^{p/2}|^2: Parseval on the power's coefficients
            weights = _even_power_weights(coeffs, p)
            total = np.polynomial.polynomial.polyval(R * R, weights)
            value = scale * total ** (1.0 / p)
            return value, 4e-16 * len(weights) * value, np.full(nrad, len(weights)), True
        if p == INF:
            powers = R[:, None] ** np.arange(len(coeffs))
            b = coeffs[None, :] * powers

            def at(theta):
                z = np.exp(1j * theta)
                acc = np.zeros(nrad, dtype=complex)
                for j in range(len(coeffs) - 1, -1, -1):
                    acc = acc * z + b[:, j]
                return np.abs(acc) ** 2

            value, err = _sup_circle(lambda n: np.abs(_poly_values(b, n)) ** 2, at, nrad, rel_tol)
            return scale * value, scale * err, np.full(nrad, SUP_SAMPLES), True
        means, errs, samples, ok = _poly_trapezoid(coeffs, R, p, rel_tol, max_samples)
        value = means ** (1.0 / p)
        with np.errstate(divide="ignore", invalid="ignore"):
            err = np.where(means > 0, value * errs / (p * means), errs ** (1.0 / p))
        return scale * value, scale * err, samples, ok

    if isinstance(f, BinomialPower):
        m = 2
    elif isinstance(f, NegBinomial):
        m = 2 * f.n
    else:
        raise MixnormError(f"unsupported function {f!r}")
    R, epsR = _reduced_radius(rho, eps, m)
    t = f._kernel()
    # for (1 + w)^a: |1 + w| = |1 - R e^{i(theta + pi)}|, and the mean and
    # the sup are invariant under the shift
    if p == INF:
        def grid(n):
            theta = 2.0 * math.pi * np.arange(n) / n
            return _kernel_power(R[:, None], epsR[:, None], theta[None, :], 2.0 * t)

        def at(theta):
            return _kernel_power(R, epsR, theta, 2.0 * t)

        value, err = _sup_circle(grid, at, nrad, rel_tol)
        return value, err, np.full(nrad, SUP_SAMPLES), True
    means, errs, samples, ok = _kernel_graded(R, epsR, t * p, rel_tol)
    value = means ** (1.0 / p)
    err = value * errs / (p * means)
    return value, err, np.full(nrad, samples), ok


def integral_mean(f, p, r, rel_tol=DEFAULT_REL_TOL, max_samples=DEFAULT_MAX_SAMPLES):
    """Integral mean ``M_p(r; f)``: the L^p average of ``|f|`` on ``|z| = r``.

    Raises :class:`NonConvergenceError` (carrying the best value) if the
    sample cap is reached first.
    """
    p = check_exponent(p)
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r!r}")
    value, err, samples, ok = _means(f, p, [r], [1.0 - r], rel_tol, max_samples)
    result = MeanResult(float(value[0]), float(err[0]), int(samples[0]))
    if not ok:
        raise NonConvergenceError(
            f"integral mean did not reach rel_tol={rel_tol} within {max_samples} samples",
            best=result,
        )
    return result


def m_small(f, p, r, **kwargs):
    """``m_p(r) = M_p(sqrt(r); f)``."""
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise DomainError(f"radius must lie in [0, 1), got {r!r}")
    return integral_mean(f, p, math.sqrt(r), **kwargs).value
