"""Mixed norms ``||f||_{p,q,a}`` and their Bergman/Hardy specializations.

For finite ``q`` the radial integral is taken in the variable
``s = (1 - r)^{aq}`` (``r = rho^2``), which turns the weight
``aq (1 - r)^{aq - 1} dr`` into ``ds`` on ``[0, 1]``:

    ||f||^q = int_0^1 m_p^q(1 - s^{1/(aq)}) ds.

The integrand is smooth away from ``s = 0`` and has an algebraic singularity
or a fractional-power kink there, so the panels are graded dyadically towards
``s = 0`` and each panel is refined by bisection until the Gauss-Legendre
estimate on the panel agrees with the one on its halves.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import special

from mixnorm import funcs
from mixnorm.errors import DivergenceError, DomainError, NonConvergenceError
from mixnorm.funcs import INF, BinomialPower, Monomial, NegBinomial, Polynomial, check_exponent
from mixnorm.specfun import _lgr_minus_clogx, log_beta, log_binom_series_coeff, log_gamma

QUADRATURE = "quadrature"
CLOSED_FORM = "closed_form"
SERIES = "series"
SUP_SCAN = "sup_scan"

DEFAULT_REL_TOL = 1e-10
_GL_ORDER = 10
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)
_CHUNK_LEVELS = 4
_MIN_LEVELS = 6
_MAX_PASSES = 60
_MAX_PANELS = 20000
_SCAN_POINTS = 1024
_GOLDEN_ITERATIONS = 60


def _check_weight(a, name="a"):
    try:
        value = float(a)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a positive real, got {a!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {a!r}")


def _json_number(x):
    if isinstance(x, Fraction) and float(x) != x:
        return str(x)
    return float(x)


def _parse_number(x):
    if isinstance(x, str):
        if x == "inf":
            return INF
        if "/" in x:
            return _parse_fraction(x)
        return funcs.parse_exponent(x)
    return x


def _parse_fraction(text):
    num, _, den = text.partition("/")
    if not (num.strip().isdigit() and den.strip().isdigit()) or int(den) == 0:
        raise DomainError(f"malformed fraction {text!r}")
    return Fraction(int(num), int(den))


@dataclass(frozen=True)
class SpaceParams:
    """The space ``H(p, q, a)``: ``p, q`` in ``(0, inf]``, ``a`` in ``(0, inf)``.

    ``a`` may be a :class:`fractions.Fraction`; the predicates in
    :mod:`mixnorm.classify` then compare exactly.
    """

    p: float
    q: float
    a: float

    def __post_init__(self):
        object.__setattr__(self, "p", check_exponent(self.p, "p"))
        object.__setattr__(self, "q", check_exponent(self.q, "q"))
        _check_weight(self.a)
        if not isinstance(self.a, Fraction):
            object.__setattr__(self, "a", float(self.a))

    def to_json(self):
        return {
            "p": funcs.format_exponent(self.p),
            "q": funcs.format_exponent(self.q),
            "a": _json_number(self.a),
        }

    @classmethod
    def from_json(cls, data):
        return cls(_parse_number(data["p"]), _parse_number(data["q"]), _parse_number(data["a"]))

    @classmethod
    def parse(cls, text):
        """Parse ``"p,q,a"``; ``inf`` is accepted for ``p`` and ``q``, and ``a``
        may be an exact fraction such as ``1/3``."""
        parts = [tok.strip() for tok in text.split(",")]
        if len(parts) != 3:
            raise DomainError(f"space must be 'p,q,a', got {text!r}")
        p, q = (funcs.parse_exponent(tok) for tok in parts[:2])
        if parts[2] == "inf":
            raise DomainError("weight a must be finite")
        if "/" in parts[2]:
            return cls(p, q, _parse_fraction(parts[2]))
        return cls(p, q, funcs.parse_exponent(parts[2]))

    def __str__(self):
        def show(x):
            return "inf" if x == INF else f"{float(x):g}"

        return f"H({show(self.p)},{show(self.q)},{show(self.a)})"


@dataclass(frozen=True)
class NormResult:
    value: float
    method: str
    abs_error_estimate: float
    divergent: bool = False
    info: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        return {
            "value": "inf" if self.value == INF else self.value,
            "method": self.method,
            "abs_error_estimate": self.abs_error_estimate,
            "divergent": self.divergent,
            **({"info": self.info} if self.info else {}),
        }


def _divergent(method, reason):
    return NormResult(INF, method, 0.0, divergent=True, info={"reason": reason})


def _blowup_exponent(f, p):
    """Rate ``k`` with ``M_p(rho; f) ~ (1 - rho)^{-k}`` near the circle (0 if bounded)."""
    if not isinstance(f, NegBinomial):
        return 0.0
    return 2.0 * f.gamma - (0.0 if p == INF else 1.0 / p)


# -- radial integration ----------------------------------------------------------


def _radial_nodes(delta):
    """``rho`` and ``1 - rho`` for ``r = rho^2 = 1 - delta``."""
    rho = np.sqrt(1.0 - delta)
    return rho, delta / (1.0 + rho)


def _panel_nodes(lo, hi):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return mid[:, None] + half[:, None] * _GL_X[None, :], half[:, None] * _GL_W[None, :]


class _RadialIntegrand:
    """``s -> m_p^q(1 - s^{1/(aq)})`` evaluated in batches."""

    def __init__(self, f, p, q, a, mean_rel_tol, max_samples):
        self.f, self.p, self.q = f, p, q
        self.beta = 1.0 / (float(a) * q)
        self.mean_rel_tol = mean_rel_tol
        self.max_samples = max_samples
        self.evaluations = 0
        self.mean_failures = 0

    def __call__(self, s):
        shape = s.shape
        s = s.ravel()
        with np.errstate(divide="ignore", under="ignore"):
            delta = np.exp(self.beta * np.log(s))
        rho, eps = _radial_nodes(delta)
        m, err, _, ok = funcs._means(self.f, self.p, rho, eps, self.mean_rel_tol, self.max_samples)
        self.evaluations += s.size
        if not ok:
            self.mean_failures += 1
        vals = m**self.q
        with np.errstate(divide="ignore", invalid="ignore"):
            verr = np.where(m > 0, self.q * vals * err / m, 0.0)
        return vals.reshape(shape), verr.reshape(shape)


def _refine(func, lo, hi, whole, rel_tol, abs_floor):
    """Bisect panels until each one's estimate matches the sum over its halves.

    Returns per-panel ``(values, errors, mean_errors)`` summed back onto the
    original panels, and the number of function evaluations.
    """
    owner = np.arange(len(lo))
    values = np.zeros(len(lo))
    errors = np.zeros(len(lo))
    mean_errors = np.zeros(len(lo))
    for _ in range(_MAX_PASSES):
        n = len(lo)
        if n == 0:
            return values, errors, mean_errors
        if n > _MAX_PANELS:
            break
        mid = 0.5 * (lo + hi)
        x, w = _panel_nodes(np.concatenate([lo, mid]), np.concatenate([mid, hi]))
        v, ve = func(x)
        halves = np.sum(v * w, axis=1)
        halves_err = np.sum(ve * w, axis=1)
        left, right = halves[:n], halves[n:]
        fine = left + right
        err = np.abs(fine - whole)
        done = (err <= 0.5 * rel_tol * np.abs(fine)) | (err <= abs_floor)
        np.add.at(values, owner[done], fine[done])
        np.add.at(errors, owner[done], err[done])
        np.add.at(mean_errors, owner[done], halves_err[:n][done] + halves_err[n:][done])
        todo = ~done
        owner = np.concatenate([owner[todo], owner[todo]])
        lo, hi = np.concatenate([lo[todo], mid[todo]]), np.concatenate([mid[todo], hi[todo]])
        whole = np.concatenate([left[todo], right[todo]])
    raise NonConvergenceError(
        f"radial quadrature did not reach rel_tol={rel_tol}",
        best=float(np.sum(values) + np.sum(whole)),
    )


def _integrate_unit(func, rel_tol, s_floor, min_depth=0):
    """``int_0^1 func(s) ds`` for a nonnegative integrand, graded towards ``s = 0``.

    Dyadic levels ``[2^{-j-1}, 2^{-j}]`` are added in chunks and refined to
    relative accuracy.  After each level the part below it is extrapolated
    geometrically from the ratio of the last two level contributions; the
    sweep stops once two successive extrapolated totals agree and at least
    ``min_depth`` levels are in (so that features of the integrand near
    ``s = 0`` cannot be mistaken for geometric decay).  Returns
    ``(value, abs_error_estimate, levels)``.
    """
    level_values = []
    partial = 0.0
    err_total = 0.0
    estimates = []
    j0 = 0
    while True:
        j = np.arange(j0, j0 + _CHUNK_LEVELS, dtype=float)
        hi = 2.0**-j
        lo = 0.5 * hi
        keep = lo >= s_floor
        lo, hi = lo[keep], hi[keep]
        if lo.size == 0:
            break
        x, w = _panel_nodes(lo, hi)
        v, _ = func(x)
        whole = np.sum(v * w, axis=1)
        floor = 1e-3 * rel_tol * max(partial, float(np.max(whole)))
        vals, errs, merrs = _refine(func, lo, hi, whole, rel_tol, floor)
        err_total += float(np.sum(errs) + np.sum(merrs))
        for value in vals.tolist():
            level_values.append(value)
            partial += value
            if len(level_values) >= 2:
                prev = level_values[-2]
                ratio = value / prev if prev > 0 else 0.0
                tail = value * ratio / (1.0 - ratio) if 0.0 <= ratio < 1.0 else INF
                estimates.append(partial + tail)
        j0 += len(lo)
        if j0 >= min_depth and len(estimates) >= _MIN_LEVELS and _settled(estimates, rel_tol):
            break
        if lo.size < _CHUNK_LEVELS:
            break
    if not estimates or not math.isfinite(estimates[-1]):
        raise NonConvergenceError("radial integrand does not decay towards the boundary", best=partial)
    value = estimates[-1]
    spread = abs(estimates[-1] - estimates[-2]) if len(estimates) >= 2 else value
    return value, err_total + spread, j0


def _settled(estimates, rel_tol):
    # two consecutive agreements guard against a lucky coincidence
    a, b, c = estimates[-3:]
    if not all(math.isfinite(x) for x in (a, b, c)):
        return False
    tol = 0.25 * rel_tol * abs(c)
    return abs(c - b) <= tol and abs(b - a) <= tol


def _s_floor(beta):
    # smallest s for which delta = s^beta stays a normal double
    return max(2.0**-1000, math.exp(-690.0 / beta))


def _finite_q_norm(f, p, q, a, rel_tol, mean_rel_tol, max_samples):
    integrand = _RadialIntegrand(f, p, q, a, mean_rel_tol, max_samples)
    # s-level at which delta = s^{1/(aq)} falls below the boundary scale;
    # structure on levels far below rel_tol cannot move the total
    depth = float(a) * q * math.log2(1.0 / funcs.boundary_scale(f))
    depth = math.ceil(min(depth, math.log2(1.0 / rel_tol) + 10.0))
    total, err, levels = _integrate_unit(integrand, rel_tol, _s_floor(integrand.beta), depth)
    value = total ** (1.0 / q)
    value_err = value * err / (q * total) if total > 0 else err ** (1.0 / q)
    info = {"levels": levels, "evaluations": integrand.evaluations}
    if integrand.mean_failures:
        info["mean_cap_hits"] = integrand.mean_failures
    return NormResult(value, QUADRATURE, value_err, info=info)


def _radial_profile(f, p, a, delta, mean_rel_tol, max_samples):
    rho, eps = _radial_nodes(delta)
    m, err, _, _ = funcs._means(f, p, rho, eps, mean_rel_tol, max_samples)
    weight = delta**a
    return weight * m, weight * err


def _sup_norm(f, p, a, mean_rel_tol, max_samples):
    """``sup_rho (1 - rho^2)^a M_p(rho; f)``: grid scan in ``delta = 1 - rho^2``
    followed by golden-section refinement in ``log delta``."""
    a = float(a)
    half = _SCAN_POINTS // 2
    uniform = 1.0 - (np.arange(half) / half) ** 2
    geometric = np.logspace(-1.0, -14.0, _SCAN_POINTS - half)
    delta = np.concatenate([uniform, geometric])
    vals, errs = _radial_profile(f, p, a, delta, mean_rel_tol, max_samples)
    best = int(np.argmax(vals))
    logd = np.log(delta)
    lo = logd[min(best + 1, len(delta) - 1)]
    hi = logd[max(best - 1, 0)] if best > 0 else 0.0
    if best == len(delta) - 1 and vals[best] > vals[best - 1] * (1 + 1e-12):
        return None
    if best == 0:
        lo = logd[1]

    def g(x):
        v, _ = _radial_profile(f, p, a, np.exp(np.minimum(x, 0.0)), mean_rel_tol, max_samples)
        return v

    refined = float(funcs._golden_max(g, np.array([lo]), np.array([hi]), _GOLDEN_ITERATIONS)[0][0])
    if best == 0 and refined <= vals[0] * (1.0 + 1e-13):
        # attained at the origin, where M_p = |f(0)| for every p
        value = float(abs(f.coefficients(1)[0]))
        return NormResult(value, SUP_SCAN, 1e-15 * value, info={"at_origin": True})
    value = max(refined, float(vals[best]))
    return NormResult(value, SUP_SCAN, float(errs[best]) + 1e-13 * value)


def mixed_norm(
    f,
    s,
    rel_tol=DEFAULT_REL_TOL,
    mean_rel_tol=funcs.DEFAULT_REL_TOL,
    max_samples=funcs.DEFAULT_MAX_SAMPLES,
):
    """Norm of ``f`` in ``H(p, q, a)``.

    Returns a :class:`NormResult`; if ``f`` is not in the space the result
    has ``value = inf`` and ``divergent = True``.
    """
    p, q, a = s.p, s.q, float(s.a)
    rate = _blowup_exponent(f, p)
    if q == INF:
        if rate > a:
            return _divergent(SUP_SCAN, f"integral means grow like (1-r)^-{rate:g}, faster than the weight decays")
        result = _sup_norm(f, p, a, mean_rel_tol, max_samples)
        if result is None:
            return _divergent(SUP_SCAN, "supremum not attained inside the disk")
        return result
    if rate >= a:
        return _divergent(QUADRATURE, f"integral means grow like (1-r)^-{rate:g}; the radial integral diverges")
    return _finite_q_norm(f, p, q, a, rel_tol, mean_rel_tol, max_samples)


def bergman_norm(f, p, alpha, **kwargs):
    """Norm in the weighted Bergman space ``A^p_alpha = H(p, p, (alpha + 1)/p)``."""
    p = check_exponent(p)
    if p == INF:
        raise DomainError("Bergman exponent must be finite")
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha > -1.0):
        raise DomainError(f"Bergman weight must be > -1, got {alpha!r}")
    return mixed_norm(f, SpaceParams(p, p, (alpha + 1.0) / p), **kwargs)


# -- Hardy norms -----------------------------------------------------------------

_HARDY_LEVELS = 40


def _circle_kernel_mean(t):
    """Mean of ``|1 - e^{i theta}|^t`` over the circle, ``t > -1``."""
    return math.exp(math.lgamma(1.0 + t) - 2.0 * math.lgamma(1.0 + 0.5 * t))


def hardy_norm(f, p, mean_rel_tol=funcs.DEFAULT_REL_TOL, max_samples=funcs.DEFAULT_MAX_SAMPLES):
    """Norm in the Hardy space ``H^p``: ``sup_r M_p(r; f)``.

    Parseval for ``p = 2`` on polynomials and closed forms for the binomial
    families; otherwise the means at ``r = 1 - 2^{-k}`` (increasing in ``r``)
    are extrapolated geometrically to ``r = 1``.
    """
    p = check_exponent(p)
    if isinstance(f, (Polynomial, Monomial)):
        if f.is_constant:
            return NormResult(float(abs(f.coefficients(1)[0])), CLOSED_FORM, 0.0)
        if isinstance(f, Monomial):
            return NormResult(1.0, CLOSED_FORM, 0.0)
        if p == 2:
            total = math.fsum(abs(c) ** 2 for c in f.coeffs)
            return NormResult(math.sqrt(total), CLOSED_FORM, 0.0)
        return _hardy_limit(f, p, mean_rel_tol, max_samples)
    if isinstance(f, BinomialPower):
        if p == INF:
            return NormResult(2.0**f.a, CLOSED_FORM, 0.0)
        return NormResult(_circle_kernel_mean(f.a * p) ** (1.0 / p), CLOSED_FORM, 0.0)
    if isinstance(f, NegBinomial):
        t = -2.0 * f.gamma * p
        if p == INF or t <= -1.0:
            return _divergent(CLOSED_FORM, "f_n is not in H^p for 2 gamma p >= 1")
        return NormResult(_circle_kernel_mean(t) ** (1.0 / p), CLOSED_FORM, 0.0)
    raise DomainError(f"unsupported function {f!r}")


def _hardy_limit(f, p, mean_rel_tol, max_samples):
    k = np.arange(1, _HARDY_LEVELS + 1, dtype=float)
    eps = 2.0**-k
    m, err, _, ok = funcs._means(f, p, 1.0 - eps, eps, mean_rel_tol, max_samples)
    if not ok:
        raise NonConvergenceError("integral means near the circle did not converge", best=float(m[-1]))
    inc = np.diff(m)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(inc[:-1] != 0, inc[1:] / inc[:-1], 0.0)
    ratio = np.clip(ratio, 0.0, 0.9)
    limits = m[2:] + inc[1:] * ratio / (1.0 - ratio)
    value = float(limits[-1])
    spread = float(abs(limits[-1] - limits[-2]))
    return NormResult(value, QUADRATURE, spread + float(err[-1]), info={"radii": _HARDY_LEVELS})


# -- closed forms and Gamma series -----------------------------------------------


def monomial_norm_closed(n, q, a):
    """``||z^{2n}||_{p,q,a} = (aq B(aq, nq + 1))^{1/q}``, for any ``p``."""
    q = check_exponent(q, "q")
    if q == INF:
        raise DomainError("closed form needs finite q")
    _check_weight(a)
    a = float(a)
    return math.exp((math.log(a * q) + log_beta(a * q, n * q + 1.0)) / q)


_SERIES_TERMS = 4096
# integration variable u in (0, 1] for the tail, graded dyadically towards 0
_TAIL_LEVELS = 48
# continued terms are never evaluated beyond this index (n k must stay finite)
_TAIL_X_MAX = 1e250


def _tail_integral(log_term, K, expo, levels):
    """``int_K^X t(x) dx`` over ``levels`` dyadic GL panels in ``u``, with
    ``x = K u^{-expo}`` and ``X`` the image of ``u = 2^{-levels}``."""
    hi = 2.0 ** -np.arange(levels, dtype=float)
    lo = 2.0 ** -np.arange(1, levels + 1, dtype=float)
    u, w = _panel_nodes(lo, hi)
    logx = math.log(K) - expo * np.log(u)
    integrand = np.exp(log_term(np.exp(logx)) + logx + math.log(expo) - np.log(u))
    return float(np.sum(integrand * w))


def _series_sum(log_term, dlog_term, sigma):
    """``sum_{k >= 0} exp(log_term(k))`` for terms decaying like ``k^{-sigma}``.

    Direct summation up to ``K`` terms, then Euler-Maclaurin: the integral of
    the continued term from ``K`` on (taken in ``u`` with
    ``x = K u^{-1/(sigma - 1)}``, where the integrand is nearly constant) plus
    the boundary corrections ``t(K)/2 - t'(K)/12``.  Past ``X`` the pure power
    law ``t(X) (X/x)^sigma`` is integrated in closed form.  Returns
    ``(sum, error)``.
    """
    K = _SERIES_TERMS
    k = np.arange(K, dtype=float)
    head = np.exp(log_term(k))
    total_head = math.fsum(head.tolist())
    expo = 1.0 / (sigma - 1.0)
    levels = _TAIL_LEVELS
    levels = min(levels, max(2, int(math.log2(_TAIL_X_MAX / K) / expo)))
    levels -= levels % 2
    fine = _tail_integral(log_term, K, expo, levels)
    # the same rule on panels twice as wide: a check of the tail quadrature
    coarse = _tail_integral(log_term, K, 2.0 * expo, levels // 2)
    X = K * 2.0 ** (levels * expo)
    tX = float(np.exp(log_term(np.array([X])))[0])
    remainder = tX * X / (sigma - 1.0)
    tK = float(np.exp(log_term(np.array([float(K)])))[0])
    dtK = tK * float(dlog_term(np.array([float(K)]))[0])
    tail = fine + remainder + 0.5 * tK - dtK / 12.0
    next_term = abs(dtK) * (sigma + 2.0) ** 2 / (720.0 * K * K)
    # the power law is exact up to relative O(1/X)
    err = 1e-14 * (total_head + tail) + abs(fine - coarse) + remainder * (sigma + 2.0) / X + next_term
    return total_head + tail, err


def _fn_hinfq_series(n, gamma, q, a):
    c = 2.0 * gamma * q
    aq = a * q
    sigma = 1.0 + aq - c
    if sigma <= 1.0:
        raise DivergenceError(f"series diverges: need gamma < a/2, got gamma={gamma}, a={a}")
    const = log_gamma(aq + 1.0)

    def log_term(k):
        nk1 = n * k + 1.0
        return const + log_binom_series_coeff(c, k) - _lgr_minus_clogx(nk1, aq) - aq * np.log(nk1)

    def dlog_term(k):
        return special.psi(k + c) - special.psi(k + 1.0) + n * (special.psi(n * k + 1.0) - special.psi(n * k + aq + 1.0))

    return _series_sum(log_term, dlog_term, sigma)


def fn_hinfq_norm_q(n, gamma, q, a):
    """``||f_n||^q`` in ``H(inf, q, a)`` from its Gamma series (``0 < gamma < a/2``).

    Raises :class:`DivergenceError` when ``gamma >= a/2``.
    """
    n, gamma, q, a = _series_args(n, gamma, q, a)
    return _fn_hinfq_series(n, gamma, q, a)[0]


def _fn_bergman_series(n, gamma, w, b, v):
    c = gamma * w
    bv = b * v
    sigma = 2.0 + bv - 2.0 * c
    if sigma <= 1.0:
        raise DivergenceError(f"series diverges: need 2 gamma w < 1 + bv, got gamma={gamma}, w={w}, bv={bv}")
    const = log_gamma(bv + 1.0)

    def log_term(k):
        m1 = 2.0 * n * k + 1.0
        return const + 2.0 * log_binom_series_coeff(c, k) - _lgr_minus_clogx(m1, bv) - bv * np.log(m1)

    def dlog_term(k):
        return 2.0 * (special.psi(k + c) - special.psi(k + 1.0)) + 2.0 * n * (
            special.psi(2.0 * n * k + 1.0) - special.psi(2.0 * n * k + bv + 1.0)
        )

    return _series_sum(log_term, dlog_term, sigma)


def fn_bergman_norm_w(n, gamma, w, b, v):
    """``||f_n||^w`` in ``A^w_{bv - 1}`` from the squared-coefficient series.

    ``f_n`` has no zeros in the disk, so ``|f_n|^w = |f_n^{w/2}|^2`` with
    ``f_n^{w/2} = (1 - z^{2n})^{-gamma w}`` and Parseval applies for every
    ``w > 0``.  Raises :class:`DivergenceError` when ``2 gamma w >= 1 + bv``.
    """
    n, gamma, w, b = _series_args(n, gamma, w, b)
    _check_weight(v, "v")
    return _fn_bergman_series(n, gamma, w, b, float(v))[0]


def _series_args(n, gamma, q, a):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    _check_weight(gamma, "gamma")
    q = check_exponent(q, "exponent")
    if q == INF:
        raise DomainError("series needs a finite exponent")
    _check_weight(a)
    return int(n), float(gamma), q, float(a)
