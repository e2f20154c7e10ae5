import io
import json
import math

import pytest

from mixnorm.errors import DomainError
from mixnorm.funcs import Monomial, Polynomial
from mixnorm.norms import monomial_norm_closed
from mixnorm.probe import (
    DEFAULT_GRIDS,
    Corpus,
    probe_contract,
    probe_hardy,
    probe_lieb_solovej,
    probe_one,
    probe_sweep,
)

ONE = Polynomial((1.0,))


def test_corpus_deterministic_and_bounded():
    a = list(Corpus(20, 8, 3).functions())
    b = list(Corpus(20, 8, 3).functions())
    assert a == b
    assert a != list(Corpus(20, 8, 4).functions())
    for f in a:
        assert 2 <= len(f.coeffs) <= 9
        assert all(abs(c.real) <= 1 and abs(c.imag) <= 1 for c in f.coeffs)
    with pytest.raises(DomainError):
        Corpus(1, 0, 0)


def test_constant_margins_vanish():
    assert probe_contract(ONE, 1.0, 1.5, 4.0).margin == pytest.approx(0.0, abs=1e-12)
    assert probe_hardy(ONE, 0.5, 4.0).margin == pytest.approx(0.0, abs=1e-12)


def test_hardy_example():
    m = probe_hardy(Polynomial((1, 1)), 0.5, 4.0)
    assert m.lower == pytest.approx((10 / 3) ** 0.25, rel=1e-10)
    assert m.upper == pytest.approx(math.sqrt(2), rel=1e-15)
    assert m.margin == pytest.approx(math.sqrt(2) - (10 / 3) ** 0.25, rel=1e-8)
    assert not m.violation


def test_monomials_use_closed_forms():
    # A^p_{cp-2} = H(p, p, c - 1/p) and ||z^{2n}|| there is F(p, c - 1/p, n)
    c, p, q, n = 1.0, 4.0, 1.5, 3
    m = probe_contract(Monomial(2 * n), c, q, p)
    expected_lower = monomial_norm_closed(n, p, c - 1 / p)
    expected_upper = monomial_norm_closed(n, q, c - 1 / q)
    assert m.lower == pytest.approx(expected_lower, rel=1e-12)
    assert m.upper == pytest.approx(expected_upper, rel=1e-12)
    assert m.error == 0.0 and m.margin > 0
    h = probe_hardy(Monomial(5), 0.5, 6.0)
    assert h.margin == pytest.approx(1.0 - h.lower, rel=1e-15) and h.margin > 0


def test_preconditions():
    with pytest.raises(DomainError):
        probe_contract(ONE, 0.5, 2.0, 4.0)  # needs 1/c < q
    with pytest.raises(DomainError):
        probe_contract(ONE, 1.0, 3.0, 2.0)
    with pytest.raises(DomainError):
        probe_hardy(ONE, 0.5, 2.0)
    with pytest.raises(DomainError):
        probe_lieb_solovej(ONE, 0.5, 2.0)
    with pytest.raises(DomainError):
        probe_one(ONE, "eq99", (1,))


def test_lieb_solovej_is_contract_with_q_two():
    f = Polynomial((0.5, -0.2j, 0.7))
    m = probe_lieb_solovej(f, 1.0, 3.0)
    base = probe_contract(f, 1.5, 2.0, 3.0)
    assert m.margin == base.margin and m.params == {"alpha": 1.0, "p": 3.0}


@pytest.mark.parametrize("conjecture", sorted(DEFAULT_GRIDS))
def test_sweep_small_corpus(conjecture):
    corpus = Corpus(3, 6, 1)
    summary = probe_sweep(corpus, conjecture)
    assert summary.probes == 3 * len(DEFAULT_GRIDS[conjecture])
    assert summary.violations == []
    assert summary.min_margin >= 0
    # reproducible from the recorded inputs
    arg = summary.argmin
    f = list(corpus.functions())[arg["index"]]
    point = tuple(arg["params"].values())
    again = probe_one(f, conjecture, point)
    assert again.margin == pytest.approx(arg["margin"], abs=1e-10)


def test_sweep_determinism_and_csv():
    corpus = Corpus(4, 5, 9)
    out1, out2 = io.StringIO(), io.StringIO()
    s1 = probe_sweep(corpus, "eq17", [(4.0,)], csv_file=out1)
    s2 = probe_sweep(corpus, "eq17", [(4.0,)], csv_file=out2)
    assert json.dumps(s1.to_json()) == json.dumps(s2.to_json())
    assert out1.getvalue() == out2.getvalue()
    lines = out1.getvalue().splitlines()
    assert lines[0].startswith("index,function,params")
    assert len(lines) == 5


def test_empty_corpus():
    summary = probe_sweep(Corpus(0, 4, 0), "eq16")
    assert summary.probes == 0 and summary.violations == []
    assert summary.to_json()["min_margin"] is None
