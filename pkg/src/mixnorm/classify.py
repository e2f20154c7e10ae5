"""Inclusion and contractivity between two mixed norm spaces.

For ``p >= u`` the inclusion ``H(p,q,a) ⊂ H(u,v,b)`` holds iff ``a < b``, or
``a = b`` and ``q <= v``; for ``p < u`` the exponents enter through
``a + 1/p`` versus ``b + 1/u``.  An inclusion with ``p >= u`` is contractive
iff ``q <= v`` and ``a <= b``, or ``q > v`` and ``aq <= bv``.  Contractivity
for ``p < u`` is an open problem and is reported as such.

All comparisons are exact: finite parameters are converted to
:class:`fractions.Fraction` (floats convert without rounding), so boundary
cases like ``aq = bv`` are decided on the values the caller supplied.
"""

from dataclasses import dataclass
from fractions import Fraction

from mixnorm.errors import DomainError
from mixnorm.funcs import INF
from mixnorm.norms import SpaceParams

HOLDS = "holds"
NONE = "none"
YES = "yes"
NO = "no"
UNKNOWN_OPEN = "unknown_open"


def _exact(x):
    return INF if x == INF else Fraction(x)


def _recip(x):
    # convention 1/inf = 0
    return Fraction(0) if x == INF else 1 / x


def _mul(x, y):
    # both factors are positive, so any infinite factor gives inf
    if x == INF or y == INF:
        return INF
    return x * y


@dataclass(frozen=True)
class Verdict:
    inclusion: str
    contractive: str
    rule_fired: str
    src: SpaceParams
    dst: SpaceParams

    def to_json(self):
        return {
            "inclusion": self.inclusion,
            "contractive": self.contractive,
            "rule_fired": self.rule_fired,
            "params": {"src": self.src.to_json(), "dst": self.dst.to_json()},
        }

    @classmethod
    def from_json(cls, data):
        params = data["params"]
        return cls(
            data["inclusion"],
            data["contractive"],
            data["rule_fired"],
            SpaceParams.from_json(params["src"]),
            SpaceParams.from_json(params["dst"]),
        )


def _inclusion(src, dst):
    p, q, a = _exact(src.p), _exact(src.q), _exact(src.a)
    u, v, b = _exact(dst.p), _exact(dst.q), _exact(dst.a)
    if p >= u:
        if a < b:
            return True, "incl:a<b"
        if a == b:
            if q <= v:
                return True, "incl:a=b,q<=v"
            return False, "no-incl:a=b,q>v"
        return False, "no-incl:a>b"
    left, right = a + _recip(p), b + _recip(u)
    if left < right:
        return True, "incl:a+1/p<b+1/u"
    if left == right:
        if q <= v:
            return True, "incl:a+1/p=b+1/u,q<=v"
        return False, "no-incl:a+1/p=b+1/u,q>v"
    return False, "no-incl:a+1/p>b+1/u"


def inclusion(src, dst):
    """Whether ``src ⊂ dst`` as sets; returns ``(holds, rule_tag)``."""
    return _inclusion(src, dst)


def contractive(src, dst):
    """Decide whether ``||f||_dst <= ||f||_src`` for every ``f`` in ``src``."""
    holds, tag = _inclusion(src, dst)
    if not holds:
        return Verdict(NONE, NO, tag, src, dst)
    if src == dst:
        return Verdict(HOLDS, YES, "identity", src, dst)
    p, q, a = _exact(src.p), _exact(src.q), _exact(src.a)
    u, v, b = _exact(dst.p), _exact(dst.q), _exact(dst.a)
    if p < u:
        return Verdict(HOLDS, UNKNOWN_OPEN, "open:p<u", src, dst)
    if q <= v:
        if a <= b:
            return Verdict(HOLDS, YES, "contractive:q<=v,a<=b", src, dst)
        # unreachable: inclusion with p >= u and q <= v forces a <= b
        return Verdict(HOLDS, NO, "not-contractive:q<=v,a>b", src, dst)
    if _mul(a, q) <= _mul(b, v):
        return Verdict(HOLDS, YES, "contractive:q>v,aq<=bv", src, dst)
    return Verdict(HOLDS, NO, "not-contractive:q>v,aq>bv", src, dst)


def bergman_space(p, alpha):
    """``A^p_alpha`` as ``H(p, p, (alpha + 1)/p)`` with an exact weight."""
    if p == INF:
        raise DomainError("Bergman exponent must be finite")
    alpha = Fraction(alpha)
    if alpha <= -1:
        raise DomainError(f"Bergman weight must be > -1, got {float(alpha)!r}")
    return SpaceParams(p, p, (alpha + 1) / Fraction(p))


def bergman_contractive(p, alpha, q, beta):
    """Contractivity of ``A^p_alpha ⊂ A^q_beta``; for ``p >= q`` this is ``alpha <= beta``."""
    return contractive(bergman_space(p, alpha), bergman_space(q, beta))
