import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixnorm.classify import (
    HOLDS,
    NO,
    NONE,
    UNKNOWN_OPEN,
    YES,
    Verdict,
    bergman_contractive,
    bergman_space,
    contractive,
    inclusion,
)
from mixnorm.errors import DomainError
from mixnorm.funcs import INF
from mixnorm.norms import SpaceParams as S

EXPONENTS = [0.5, 1, 2, 3, INF]
WEIGHTS = [0.25, 0.5, 1, 2]

exponent = st.sampled_from([0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, INF])
weight = st.sampled_from([0.125, 0.25, 1 / 3, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0])
space = st.builds(S, exponent, exponent, weight)


# -- examples --------------------------------------------------------------------


def test_inclusion_examples():
    assert inclusion(S(4, 2, 1), S(2, 3, 1)) == (True, "incl:a=b,q<=v")
    assert inclusion(S(2, 2, 1), S(2, 2, 0.5)) == (False, "no-incl:a>b")
    assert inclusion(S(1, 2, 1), S(3, 2, 1)) == (False, "no-incl:a+1/p>b+1/u")
    assert inclusion(S(1, 2, 1), S(2, 2, 1.5)) == (True, "incl:a+1/p=b+1/u,q<=v")


def test_contractive_examples():
    v = contractive(S(4, 2, 1), S(2, 3, 1))
    assert (v.inclusion, v.contractive, v.rule_fired) == (HOLDS, YES, "contractive:q<=v,a<=b")
    v = contractive(S(3, 4, 1), S(2, 2, 1.5))
    assert (v.inclusion, v.contractive, v.rule_fired) == (HOLDS, NO, "not-contractive:q>v,aq>bv")
    v = contractive(S(2, 3, 1), S(2, 1, 3.5))
    assert (v.inclusion, v.contractive, v.rule_fired) == (HOLDS, YES, "contractive:q>v,aq<=bv")
    v = contractive(S(1, 2, 1), S(3, 2, 1))
    assert (v.inclusion, v.contractive) == (NONE, NO)
    v = contractive(S(1, 2, 1), S(3, 2, 2))
    assert (v.inclusion, v.contractive, v.rule_fired) == (HOLDS, UNKNOWN_OPEN, "open:p<u")


def test_infinite_q_never_satisfies_case_two():
    v = contractive(S(2, INF, 1), S(2, 3, 100))
    assert v.contractive == NO
    assert contractive(S(2, INF, 1), S(2, INF, 1.5)).contractive == YES


def test_bergman_examples():
    assert bergman_contractive(4, 1, 2, 1).contractive == YES
    assert bergman_contractive(3, 0.5, 3, 0.5).contractive == YES
    v = bergman_contractive(4, 2, 2, 1)
    assert (v.inclusion, v.contractive) == (HOLDS, NO)
    assert bergman_space(3, 1) == S(3, 3, Fraction(2, 3))
    with pytest.raises(DomainError):
        bergman_space(2, -1)


@pytest.mark.parametrize("p, q", [(2, 2), (3, 2), (6, 1.5), (4, 3)])
@pytest.mark.parametrize("alpha, beta", [(0, 0), (0.5, 1), (1, 0.5), (2, 3), (-0.5, -0.25)])
def test_bergman_reduces_to_weight_order(p, q, alpha, beta):
    assert (bergman_contractive(p, alpha, q, beta).contractive == YES) == (alpha <= beta)


# -- exactness -------------------------------------------------------------------


def test_boundary_decided_exactly():
    # aq = bv exactly in rationals, though 0.1 * 3 != 0.3 in floating point
    third = Fraction(1, 3)
    v = contractive(S(2, 3, third), S(2, 1, 1))
    assert v.contractive == YES
    v = contractive(S(2, 3, third + Fraction(1, 10**12)), S(2, 1, 1))
    assert v.contractive == NO


def test_float_inputs_compared_as_given():
    # 0.1 * 3 exceeds 0.3 as rationals of the binary values supplied
    assert contractive(S(2, 3, 0.1), S(2, 1, 0.3)).contractive == NO
    assert contractive(S(2, 3, 0.1), S(2, 1, 0.30000000000000004)).contractive == YES


# -- properties ------------------------------------------------------------------


@given(space)
def test_identity_is_contractive(s):
    v = contractive(s, s)
    assert (v.inclusion, v.contractive) == (HOLDS, YES)


@given(space, space)
def test_verdict_invariants(src, dst):
    v = contractive(src, dst)
    if v.contractive == YES:
        assert v.inclusion == HOLDS
    if v.contractive == UNKNOWN_OPEN:
        assert src.p < dst.p and v.inclusion == HOLDS
    if v.inclusion == NONE:
        assert v.contractive == NO
    assert Verdict.from_json(v.to_json()) == v


@given(exponent, exponent, weight)
def test_boundary_coherence(p, q, a):
    src = S(p, q, a)
    assert contractive(src, S(p, q, a)).contractive == YES
    assert contractive(src, S(p, q, a * 1.001)).contractive == YES


@given(exponent, weight, st.sampled_from([0.5, 1.0, 2.0]), st.sampled_from([1.5, 2.0, 3.0]))
def test_lowering_b_below_aq_over_v_flips(p, a, v, ratio):
    q = v * ratio
    b_edge = a * q / v
    assert contractive(S(p, q, a), S(p, v, b_edge)).contractive == YES
    lowered = contractive(S(p, q, a), S(p, v, b_edge * 0.999))
    assert lowered.inclusion == HOLDS and lowered.contractive == NO


def test_grid_matches_hand_predicate():
    for p, u in itertools.product([0.5, 1, 2, INF], repeat=2):
        if p < u:
            continue
        for q, v, a, b in itertools.product(EXPONENTS, EXPONENTS, WEIGHTS, WEIGHTS):
            verdict = contractive(S(p, q, a), S(u, v, b))
            included = a < b or (a == b and q <= v)
            aq = INF if q == INF else a * q
            bv = INF if v == INF else b * v
            expected = included and ((q <= v and a <= b) or (q > v and aq <= bv))
            assert (verdict.inclusion == HOLDS) == included
            assert (verdict.contractive == YES) == expected
