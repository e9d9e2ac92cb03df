from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quiverbf.bpoly import FactorProduct, LinearFactor, bracket, bracket_ratio, equal_up_to_scalar
from quiverbf.sparsepoly import SparsePoly


def _direct(d, m, a, b, s):
    D = sum(x * y for x, y in zip(d, m))
    out = Fraction(1)
    for i in range(b - a + 1, b + 1):
        for j in range(D):
            out *= sum(x * y for x, y in zip(d, s)) + i + j
    return out


def test_bracket_examples():
    assert bracket(1, 1, 3, 3).text(brackets=False, sep="") == "(s+1)(s+2)(s+3)"
    assert bracket(1, 1, 2, 4).text() == "[s]_{2,4}"
    assert bracket(2, 1, 1, 2).text() == "(2s+2)*(2s+3)"
    assert bracket(1, 1, 0, 5).is_unit()


def test_multi_variable_text():
    b = bracket((1, 1), (1, 1), 1, 2)
    assert b.text() == "(s1+s2+2)*(s1+s2+3)"
    assert bracket((0, 1), (1, 1), 2, 2).text() == "[s2]_{2}"


@given(d=st.lists(st.integers(0, 3), min_size=1, max_size=3),
       m=st.lists(st.integers(1, 3), min_size=3, max_size=3),
       a=st.integers(0, 4), extra=st.integers(0, 3),
       s=st.lists(st.integers(-3, 3), min_size=3, max_size=3))
@settings(max_examples=80, deadline=None)
def test_bracket_matches_definition(d, m, a, extra, s):
    l = len(d)
    if not any(d):
        d = [1] + d[1:]
    m = m[:l]
    b = a + extra
    br = bracket(tuple(d), tuple(m), a, b)
    D = sum(x * y for x, y in zip(d, m))
    assert br.degree() == a * D
    names = [f"s{i}" for i in range(1, l + 1)] if l > 1 else ["s"]
    val = br.expand(names).evaluate(dict(zip(names, s[:l])))
    assert val == _direct(d, m, a, b, s[:l])


@given(r1=st.integers(0, 6), r2=st.integers(-3, 6), d=st.integers(1, 3))
@settings(max_examples=50, deadline=None)
def test_ratio_cancels(r1, r2, d):
    q = bracket_ratio(d, 1, r1, r2)
    back = q * bracket(d, 1, max(r2, 0), max(r2, 0))
    assert back == bracket(d, 1, r1, r1)
    assert q.degree() == d * (r1 - max(r2, 0))


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(-2, 5), st.integers(1, 3)), max_size=6),
       st.fractions(min_value=-5, max_value=5).filter(lambda x: x != 0))
@settings(max_examples=50, deadline=None)
def test_json_round_trip(parts, scalar):
    fp = FactorProduct(1, scalar, tuple((LinearFactor((c,), sh), k) for c, sh, k in parts))
    assert FactorProduct.from_json(fp.to_json()) == fp


@given(st.lists(st.tuples(st.integers(1, 2), st.integers(1, 4)), min_size=1, max_size=5),
       st.integers(-9, 9).filter(bool))
@settings(max_examples=40, deadline=None)
def test_equal_up_to_scalar(parts, lam):
    fp = FactorProduct.from_factors([LinearFactor((c,), sh) for c, sh in parts])
    res = equal_up_to_scalar(fp.expand().scale(lam), fp)
    assert res.match and res.scalar == lam
    other = fp * FactorProduct.from_factors([LinearFactor((1,), 7)])
    assert not equal_up_to_scalar(other, fp).match


def test_expand_refuses_negative_multiplicity():
    with pytest.raises(ValueError):
        bracket_ratio(1, 1, 1, 3).expand()


def test_sparsepoly_arithmetic():
    g = ("x", "y")
    x, y = SparsePoly.var(g, "x"), SparsePoly.var(g, "y")
    p = (x + y) ** 2
    assert p == x * x + (x * y).scale(2) + y * y
    assert p.total_degree() == 2 and p.is_homogeneous()
    assert p.derivative(0) == (x + y).scale(2)
    assert p.evaluate({"x": 2, "y": 3}) == 25
    assert x.apply_as_operator(p) == (x + y).scale(2)
