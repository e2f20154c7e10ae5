import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from mixnorm.errors import DivergenceError, DomainError, NonConvergenceError
from mixnorm.funcs import INF, BinomialPower, Monomial, NegBinomial, Polynomial, integral_mean, m_small
from mixnorm.norms import (
    CLOSED_FORM,
    SpaceParams,
    bergman_norm,
    fn_bergman_norm_w,
    fn_hinfq_norm_q,
    hardy_norm,
    mixed_norm,
    monomial_norm_closed,
)
from mixnorm.probe import Corpus
from mixnorm.specfun import binom_series_coeffs

S = SpaceParams
ONE = Polynomial((1.0,))
POLYS = list(Corpus(6, 10, 21).functions())


def weighted_oracle(f, p, q, a):
    """``int_0^1 aq (1-r)^{aq-1} m_p^q(r) dr`` with QUADPACK's algebraic endpoint weight."""
    # QUADPACK samples the endpoint itself; the integrand is continuous there
    def g(r):
        rho = math.sqrt(min(r, 1.0 - 1e-10))
        try:
            mean = integral_mean(f, p, rho).value
        except NonConvergenceError as exc:
            # a circle through a zero of f: the trapezoid converges only
            # algebraically there, but such radii carry no measure
            mean = exc.best.value
        return a * q * mean**q

    value, _ = integrate.quad(g, 0.0, 1.0, weight="alg", wvar=(0.0, a * q - 1.0), epsabs=0.0, epsrel=1e-10, limit=200)
    return value ** (1.0 / q)


# -- SpaceParams -----------------------------------------------------------------


def test_space_params_parse_and_json():
    s = S.parse("inf, 2, 0.5")
    assert s == S(INF, 2, 0.5)
    assert s.to_json() == {"p": "inf", "q": 2.0, "a": 0.5}
    assert S.from_json(s.to_json()) == s
    exact = S.parse("2,3,1/3")
    assert exact.a == Fraction(1, 3)
    assert exact.to_json()["a"] == "1/3"
    assert S.from_json(exact.to_json()) == exact


@pytest.mark.parametrize("text", ["2,2", "2,2,0", "2,2,-1", "Infinity,2,1", "2,2,inf", "2,2,1/0", "0,1,1"])
def test_space_params_rejects(text):
    with pytest.raises(DomainError):
        S.parse(text)


# -- examples --------------------------------------------------------------------


@pytest.mark.parametrize("s", [S(2, 2, 0.5), S(0.5, 3, 2), S(INF, 1, 0.25), S(1, INF, 1), S(INF, INF, 3)])
def test_constant_one_has_unit_norm(s):
    assert mixed_norm(ONE, s).value == pytest.approx(1.0, abs=1e-12)


def test_monomial_examples():
    assert mixed_norm(Monomial(2), S(2, 2, 0.5)).value == pytest.approx(3**-0.5, rel=1e-10)
    for p in (0.5, 2, INF):
        assert mixed_norm(Monomial(2), S(p, INF, 1)).value == pytest.approx(0.25, rel=1e-12)


def test_bergman_examples():
    assert bergman_norm(ONE, 2, 0).value == pytest.approx(1.0, abs=1e-12)
    assert bergman_norm(Monomial(2), 2, 0).value == pytest.approx(3**-0.5, rel=1e-10)
    # 1 + ||z^2||^2 with ||z^2||^2_{A^2_3} = 4 int_0^1 (1-r)^3 r^2 dr = 1/15
    assert bergman_norm(Polynomial((1, 0, 1)), 2, 3).value == pytest.approx(math.sqrt(16 / 15), rel=1e-10)


def test_bergman_domain():
    with pytest.raises(DomainError):
        bergman_norm(ONE, INF, 0)
    with pytest.raises(DomainError):
        bergman_norm(ONE, 2, -1)


def test_hardy_examples():
    r = hardy_norm(Polynomial((1, 1)), 2)
    assert r.value == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert r.method == CLOSED_FORM and r.abs_error_estimate == 0.0
    for p in (0.5, 1, 3, INF):
        assert hardy_norm(Monomial(5), p).value == 1.0


def test_hardy_polynomial_limit():
    # H^4 norm of 1 + z: mean of |1 + e^{it}|^4 is C(4, 2) = 6
    r = hardy_norm(Polynomial((1, 1)), 4)
    assert r.value == pytest.approx(6**0.25, rel=1e-12)
    # H^1 norm of 1 + z is 4/pi; the boundary zero slows the limit
    r = hardy_norm(Polynomial((1, 1)), 1)
    assert r.value == pytest.approx(4 / math.pi, rel=1e-7)


def test_hardy_negbinomial_against_coefficient_sum():
    # gamma = 0.25 at p = 2 lies exactly on the divergence boundary
    assert hardy_norm(NegBinomial(1, 0.25), 2).divergent
    coeffs = binom_series_coeffs(0.4, 2_000_000)
    head = math.fsum(coeffs**2)
    # c_k^2 ~ k^{-1.2} / Gamma(0.4)^2; integral-comparison tail bound
    K = len(coeffs)
    tail = K**-0.2 / 0.2 / math.gamma(0.4) ** 2
    exact = math.sqrt(head + tail)
    assert hardy_norm(NegBinomial(1, 0.2), 2).value == pytest.approx(exact, rel=1e-5)


def test_hardy_binomial_power_closed_form():
    # H^2 norm of (1 + z^2)^a is sqrt(sum C(a, j)^2) = sqrt(C(2a, a))
    a = 1.7
    expected = math.sqrt(math.gamma(2 * a + 1) / math.gamma(a + 1) ** 2)
    assert hardy_norm(BinomialPower(a), 2).value == pytest.approx(expected, rel=1e-13)
    assert hardy_norm(BinomialPower(a), INF).value == pytest.approx(2**a, rel=1e-15)


def test_monomial_closed_form_examples():
    assert monomial_norm_closed(1, 2, 0.5) == pytest.approx(3**-0.5, rel=1e-14)
    assert monomial_norm_closed(1, 1, 1) == pytest.approx(0.5, rel=1e-14)
    q, a = 2.5, 0.8
    for p in (0.5, 2, INF):
        assert mixed_norm(Monomial(6), S(p, q, a)).value == pytest.approx(monomial_norm_closed(3, q, a), rel=1e-8)


@pytest.mark.parametrize("n", [1, 2, 5, 10])
@pytest.mark.parametrize("q", [0.5, 1, 2, 3])
@pytest.mark.parametrize("a", [0.25, 1, 2])
def test_monomial_closed_form_vs_quadrature(n, q, a):
    got = mixed_norm(Monomial(2 * n), S(2, q, a)).value
    assert got == pytest.approx(monomial_norm_closed(n, q, a), rel=1e-8)


# -- quadrature against an independent weighted rule ------------------------------


@pytest.mark.parametrize("f", POLYS[2:5] + [BinomialPower(0.8)], ids=str)
@pytest.mark.parametrize("p, q, a", [(2, 2, 0.5), (1, 0.5, 1), (3, 1, 0.25), (0.5, 3, 1)])
def test_substitution_identity(f, p, q, a):
    assert mixed_norm(f, S(p, q, a)).value == pytest.approx(weighted_oracle(f, p, q, a), rel=1e-8)


def test_sup_norm_against_dense_radial_scan():
    f = Polynomial((0.2, 1.0, -0.7, 0.4j))
    rho = np.linspace(0.0, 0.9999, 20001)
    profile = [(1 - r * r) * m_small(f, 2, r * r) for r in rho[::20]]
    assert mixed_norm(f, S(2, INF, 1)).value >= max(profile) * (1 - 1e-12)
    assert mixed_norm(f, S(2, INF, 1)).value == pytest.approx(max(profile), rel=1e-5)


def test_sup_at_origin_is_exact():
    f = Polynomial((1.3, 0.1, 0.05))
    r = mixed_norm(f, S(2, INF, 2))
    assert r.value == 1.3
    assert r.info.get("at_origin")


# -- divergence ------------------------------------------------------------------


def test_negbinomial_divergence_flags():
    f = NegBinomial(1, 0.5)
    r = mixed_norm(f, S(INF, 2, 1))
    assert r.divergent and r.value == INF
    assert not mixed_norm(f, S(INF, INF, 1)).divergent
    assert mixed_norm(NegBinomial(1, 0.6), S(INF, INF, 1)).divergent
    # M_2 grows like (1-r)^{-(2 gamma - 1/2)}
    assert not mixed_norm(NegBinomial(1, 0.7), S(2, 1, 1)).divergent
    assert mixed_norm(NegBinomial(1, 0.75), S(2, 1, 1)).divergent


# -- f_n series ------------------------------------------------------------------


def test_series_first_term_and_lower_bound():
    for n in (1, 3, 50):
        assert fn_hinfq_norm_q(n, 0.2, 2, 1) >= 1.0
        assert fn_bergman_norm_w(n, 0.2, 2, 1, 2) >= 1.0
    # gamma -> 0: only the k = 0 term survives
    assert fn_hinfq_norm_q(3, 1e-12, 2, 1) == pytest.approx(1.0, abs=1e-10)


def test_hinfq_series_vs_quadrature():
    n, gamma, q, a = 2, 0.2, 2, 1
    quad = mixed_norm(NegBinomial(n, gamma), S(INF, q, a)).value ** q
    assert fn_hinfq_norm_q(n, gamma, q, a) == pytest.approx(quad, rel=1e-6)


@pytest.mark.parametrize("w", [1.0, 1.5, 2.0, 3.0])
def test_bergman_series_vs_quadrature(w):
    n, gamma, b, v = 1, 0.2, 1, 2
    quad = bergman_norm(NegBinomial(n, gamma), w, b * v - 1).value ** w
    assert fn_bergman_norm_w(n, gamma, w, b, v) == pytest.approx(quad, rel=1e-8)


def test_series_slow_convergence_against_quadrature():
    # sigma = 1 + aq - 2 gamma q = 1.1: the tail carries most of the excess
    n, gamma, q, a = 4, 0.45, 1.0, 1.0
    quad = mixed_norm(NegBinomial(n, gamma), S(INF, q, a)).value ** q
    assert fn_hinfq_norm_q(n, gamma, q, a) == pytest.approx(quad, rel=1e-9)


def test_bergman_series_scaling_in_n():
    b, v, w, gamma = 1.0, 2.0, 2.0, 0.25
    scaled = [n ** (b * v) * (fn_bergman_norm_w(n, gamma, w, b, v) - 1.0) for n in (2**k for k in range(3, 11))]
    assert min(scaled) > 0
    assert max(scaled) / min(scaled) < 2.0


def test_series_divergence():
    with pytest.raises(DivergenceError):
        fn_hinfq_norm_q(1, 0.5, 2, 1)
    with pytest.raises(DivergenceError):
        fn_bergman_norm_w(1, 0.75, 2, 1, 2)
    with pytest.raises(DomainError):
        fn_hinfq_norm_q(0, 0.2, 2, 1)


# -- inclusions on a small corpus (the full check lives in the acceptance suite) --

CONTRACTIVE = [
    (S(2, 1, 0.5), S(1, 2, 0.5)),
    (S(3, 0.5, 1), S(2, 3, 1)),
    (S(2, 2, 1), S(1, 1, 2)),
    (S(INF, 3, 0.5), S(2, 1, 1.5)),
    (S(2, 2, 0.5), S(2, 2, 1)),
    (S(1, INF, 0.5), S(0.5, INF, 1)),
]


@pytest.mark.parametrize("src, dst", CONTRACTIVE, ids=str)
def test_contractive_inclusions_on_corpus(src, dst):
    for f in POLYS:
        big = mixed_norm(f, src, rel_tol=1e-8, mean_rel_tol=1e-9)
        small = mixed_norm(f, dst, rel_tol=1e-8, mean_rel_tol=1e-9)
        assert small.value <= big.value * (1 + 1e-8)


def test_hardy_limit_trend():
    # ||f||_{A^p_{cp-2}} increases towards ||f||_{H^{1/c}} as p decreases to 1/c
    f = POLYS[0]
    c = 0.5
    values = [bergman_norm(f, p, c * p - 2).value for p in (4.0, 3.0, 2.5, 2.1, 2.01)]
    assert all(v1 > v0 for v0, v1 in zip(values, values[1:]))
    assert values[-1] < hardy_norm(f, 2).value
    assert hardy_norm(f, 2).value - values[-1] < 0.05 * (hardy_norm(f, 2).value - values[0])
