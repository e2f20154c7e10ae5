"""Counterexamples for non-contractive inclusions, and a certified check of
the inequality ``||f||_dst <= ||f||_src`` for contractive ones.

For ``q = inf`` the function ``(1 + z^2)^a`` has norm 1 in ``H(p, inf, a)``
(attained at the origin) but norm above 1 in any space with finite ``v``.
For finite ``q > v`` with ``aq > bv`` the functions
``f_n = (1 - z^{2n})^{-2 gamma}`` are used: comparing the larger norm in
``H(inf, q, a)`` with the smaller one in ``A^w_{bv-1}``, ``w = min(u, v)``,
both tend to 1, at rates ``n^{-aq}`` and ``n^{-bv}``, so for large ``n``
the second exceeds the first.  The search doubles ``n``; the first ``n``
that works is returned, not the smallest.
"""

from dataclasses import dataclass, field

from mixnorm import classify
from mixnorm.errors import DomainError, NonConvergenceError
from mixnorm.funcs import INF, BinomialPower, NegBinomial, parse_function
from mixnorm.norms import (
    NormResult,
    SpaceParams,
    _fn_bergman_series,
    _fn_hinfq_series,
    bergman_norm,
    mixed_norm,
)

DEFAULT_GAMMA_FRACTION = 0.25
DEFAULT_N_CAP = 2**48
WITNESS_REL_TOL = 1e-10
VERIFY_REL_TOL = 1e-12


@dataclass(frozen=True)
class Witness:
    src: SpaceParams
    dst: SpaceParams
    function: object
    lhs_norm: NormResult
    rhs_norm: NormResult
    gap: float
    verified: bool
    n: int = None
    gamma: float = None
    details: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        out = {
            "src": self.src.to_json(),
            "dst": self.dst.to_json(),
            "function": self.function.literal(),
            "n": self.n,
            "gamma": self.gamma,
            "lhs_norm": self.lhs_norm.to_json(),
            "rhs_norm": self.rhs_norm.to_json(),
            "gap": self.gap,
            "verified": self.verified,
        }
        out.update(self.details)
        return out

    @classmethod
    def from_json(cls, data):
        known = {"src", "dst", "function", "n", "gamma", "lhs_norm", "rhs_norm", "gap", "verified"}
        return cls(
            src=SpaceParams.from_json(data["src"]),
            dst=SpaceParams.from_json(data["dst"]),
            function=parse_function(data["function"]),
            lhs_norm=_norm_from_json(data["lhs_norm"]),
            rhs_norm=_norm_from_json(data["rhs_norm"]),
            gap=data["gap"],
            verified=data["verified"],
            n=data.get("n"),
            gamma=data.get("gamma"),
            details={k: v for k, v in data.items() if k not in known},
        )


def _norm_from_json(data):
    value = INF if data["value"] == "inf" else data["value"]
    return NormResult(value, data["method"], data["abs_error_estimate"], data.get("divergent", False), data.get("info", {}))


def _require_non_contractive(src, dst):
    verdict = classify.contractive(src, dst)
    if verdict.inclusion != classify.HOLDS:
        raise DomainError(f"{src} is not contained in {dst} ({verdict.rule_fired})")
    if verdict.contractive != classify.NO:
        raise DomainError(f"{src} -> {dst} is {verdict.contractive}, not non-contractive")
    return verdict


def _gap_ok(lhs, rhs):
    gap = rhs.value - lhs.value
    return gap, gap > lhs.abs_error_estimate + rhs.abs_error_estimate


def witness_qinf(src, dst, rel_tol=WITNESS_REL_TOL):
    """Witness for ``src = H(p, inf, a)`` using ``f = (1 + z^2)^a``."""
    _require_non_contractive(src, dst)
    if src.q != INF:
        raise DomainError("witness_qinf needs q = inf in the source space")
    f = BinomialPower(float(src.a))
    lhs = mixed_norm(f, src, rel_tol=rel_tol)
    rhs = mixed_norm(f, dst, rel_tol=rel_tol)
    gap, ok = _gap_ok(lhs, rhs)
    return Witness(src, dst, f, lhs, rhs, gap, ok, details={"tolerances": {"rel_tol": rel_tol}})


def _relaxed_spaces(src, dst):
    w = min(dst.p, dst.q)
    bv = float(dst.a) * dst.q
    return SpaceParams(INF, src.q, src.a), w, bv


def witness_qfin(
    src,
    dst,
    gamma_fraction=DEFAULT_GAMMA_FRACTION,
    n_cap=DEFAULT_N_CAP,
    rel_tol=WITNESS_REL_TOL,
):
    """Witness for finite ``q > v`` with ``aq > bv`` from the ``f_n`` family.

    ``gamma = gamma_fraction * a`` must lie in ``(0, a/2)``.  Raises
    :class:`NonConvergenceError` if no ``n <= n_cap`` separates the series.
    """
    _require_non_contractive(src, dst)
    if src.q == INF:
        raise DomainError("witness_qfin needs finite q in the source space")
    if not 0.0 < gamma_fraction < 0.5:
        raise DomainError(f"gamma_fraction must lie in (0, 1/2), got {gamma_fraction!r}")
    a, q = float(src.a), src.q
    b, v = float(dst.a), dst.q
    gamma = gamma_fraction * a
    relaxed_src, w, bv = _relaxed_spaces(src, dst)
    n = 1
    trail = []
    while n <= n_cap:
        lhs_q, lhs_q_err = _fn_hinfq_series(n, gamma, q, a)
        rhs_w, rhs_w_err = _fn_bergman_series(n, gamma, w, b, v)
        lhs = lhs_q ** (1.0 / q)
        rhs = rhs_w ** (1.0 / w)
        margin = lhs * lhs_q_err / (q * lhs_q) + rhs * rhs_w_err / (w * rhs_w)
        trail.append({"n": n, "lhs": lhs, "rhs": rhs})
        if rhs - lhs > margin:
            break
        n *= 2
    else:
        raise NonConvergenceError(
            f"no n <= {n_cap} separates the norms; last lhs={trail[-1]['lhs']!r} rhs={trail[-1]['rhs']!r}",
            best=trail[-1],
        )
    f = NegBinomial(n, gamma)
    relaxed_lhs = mixed_norm(f, relaxed_src, rel_tol=rel_tol)
    relaxed_rhs = bergman_norm(f, w, bv - 1.0, rel_tol=rel_tol)
    relaxed_gap, relaxed_ok = _gap_ok(relaxed_lhs, relaxed_rhs)
    lhs_norm = mixed_norm(f, src, rel_tol=rel_tol)
    rhs_norm = mixed_norm(f, dst, rel_tol=rel_tol)
    gap, ok = _gap_ok(lhs_norm, rhs_norm)
    details = {
        "series": {"lhs": lhs, "rhs": rhs, "w": w, "search": trail},
        "relaxed": {
            "src": relaxed_src.to_json(),
            "dst": {"bergman_p": w, "bergman_alpha": bv - 1.0},
            "lhs_norm": relaxed_lhs.to_json(),
            "rhs_norm": relaxed_rhs.to_json(),
            "verified": relaxed_ok,
        },
        "tolerances": {"rel_tol": rel_tol},
    }
    return Witness(src, dst, f, lhs_norm, rhs_norm, gap, ok and relaxed_ok, n=n, gamma=gamma, details=details)


def find_witness(src, dst, **kwargs):
    """Dispatch to :func:`witness_qinf` or :func:`witness_qfin` on ``src.q``."""
    if src.q == INF:
        kwargs.pop("gamma_fraction", None)
        kwargs.pop("n_cap", None)
        return witness_qinf(src, dst, **kwargs)
    return witness_qfin(src, dst, **kwargs)


def verify_witness(w, rel_tol=VERIFY_REL_TOL):
    """Recompute both norms by quadrature at a tighter tolerance.

    True iff the recomputed gap exceeds the combined error and the recorded
    norms agree with the recomputed ones.
    """
    lhs = mixed_norm(w.function, w.src, rel_tol=rel_tol, mean_rel_tol=0.1 * rel_tol)
    rhs = mixed_norm(w.function, w.dst, rel_tol=rel_tol, mean_rel_tol=0.1 * rel_tol)
    if lhs.divergent or rhs.divergent:
        return False
    _, ok = _gap_ok(lhs, rhs)
    return ok and _agrees(w.lhs_norm, lhs) and _agrees(w.rhs_norm, rhs)


def _agrees(recorded, fresh):
    slack = 10.0 * (recorded.abs_error_estimate + fresh.abs_error_estimate) + 1e-9 * abs(fresh.value)
    return abs(recorded.value - fresh.value) <= slack


# -- certified comparison for contractive pairs ----------------------------------

# (radial rel_tol, circle-mean rel_tol), loosest first
TOLERANCE_LADDER = ((1e-3, 1e-4), (1e-6, 1e-7), (1e-10, 1e-11))


@dataclass(frozen=True)
class Comparison:
    """Outcome of checking ``||f||_dst <= ||f||_src (1 + slack)``."""

    holds: bool
    certified: bool
    lhs: float
    rhs: float
    rel_tol: float


def _uncertainty(result, rel_tol):
    # error estimates are heuristics; pad them and never go below the tolerance,
    # except for suprema attained at the origin, which are exact
    if result.info.get("at_origin"):
        return 10.0 * result.abs_error_estimate
    return max(10.0 * result.abs_error_estimate, rel_tol * result.value)


def check_inequality(f, src, dst, slack=1e-8, cache=None, ladder=TOLERANCE_LADDER):
    """Decide ``||f||_dst <= ||f||_src (1 + slack)``, tightening tolerances only
    while the two sides are too close to call.

    ``cache`` (a dict) may be shared across calls with the same ``f`` to reuse
    norms of spaces that appear in several pairs.
    """
    cache = {} if cache is None else cache

    def norm(s, tols):
        key = (s, tols)
        if key not in cache:
            cache[key] = mixed_norm(f, s, rel_tol=tols[0], mean_rel_tol=tols[1])
        return cache[key]

    for tols in ladder:
        big = norm(src, tols)
        small = norm(dst, tols)
        if big.divergent:
            return Comparison(True, True, small.value, big.value, tols[0])
        u_small = _uncertainty(small, tols[0])
        u_big = _uncertainty(big, tols[0])
        bound = big.value * (1.0 + slack)
        if small.value + u_small <= bound - u_big * (1.0 + slack):
            return Comparison(True, True, small.value, big.value, tols[0])
        if small.value - u_small > bound + u_big * (1.0 + slack):
            return Comparison(False, True, small.value, big.value, tols[0])
    return Comparison(small.value <= bound, False, small.value, big.value, tols[0])
