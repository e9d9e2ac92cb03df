import random

from hypothesis import given, settings, strategies as st

from quiverbf.candecomp import (
    an_decomposition,
    dn_canonical,
    ext_vanishes,
    generic_decomposition,
    interval,
)
from quiverbf.quiver import Quiver

from _support import D4_IN, D5_APP, D6_APP, orient


def _as_dict(pairs):
    return {tuple(r): k for r, k in pairs}


def test_d5_diagram_example():
    res = dn_canonical(D5_APP, (3, 6, 5, 3, 4))
    assert res.decomposition.as_dict() == _as_dict([
        ((1, 1, 1, 1, 0), 1), ((0, 1, 1, 1, 1), 2), ((1, 2, 1, 0, 1), 1), ((1, 1, 1, 0, 1), 1)])
    assert res.diagram.stop_reason.startswith("(c)")
    assert res.diagram.circles() == 4


def test_d6_diagram_example():
    res = dn_canonical(D6_APP, (3, 5, 6, 3, 5, 4))
    expected = _as_dict([
        ((1, 1, 1, 0, 0, 1), 1), ((1, 1, 1, 1, 1, 1), 1), ((1, 2, 2, 1, 1, 1), 1),
        ((0, 1, 1, 0, 0, 1), 1), ((0, 0, 0, 0, 1, 0), 2), ((0, 0, 1, 1, 1, 0), 1)])
    assert res.decomposition.as_dict() == expected
    assert res.decomposition.same_as(generic_decomposition(D6_APP, (3, 5, 6, 3, 5, 4)))
    assert res.diagram.stop_reason.startswith("(b)")
    assert res.decomposition.total() == (3, 5, 6, 3, 5, 4)


def test_a5_decomposition():
    A5 = Quiver.from_edges([1, 2, 3, 4, 5], [(1, 2), (3, 2), (3, 4), (4, 5)])
    dec = an_decomposition(A5, (3, 5, 6, 3, 5))
    assert sorted((interval(r), k) for r, k in dec.summands) == [
        ((1, 3), 1), ((1, 5), 2), ((2, 3), 2), ((3, 5), 1), ((5, 5), 2)]
    assert dec.same_as(generic_decomposition(A5, (3, 5, 6, 3, 5)))


def test_d4_generic():
    dec = generic_decomposition(D4_IN, (1, 1, 2, 2))
    assert dec.as_dict() == {(0, 1, 1, 1): 1, (1, 0, 1, 1): 1}
    assert ext_vanishes(dec)


def _random_dn(rng, n):
    edges = [(1, 2)] + [(i, i + 1) for i in range(2, n - 1)] + [(2, n)]
    return Quiver.from_edges(range(1, n + 1), orient(edges, rng))


@given(seed=st.integers(0, 10**6), n=st.integers(4, 7))
@settings(max_examples=25, deadline=None)
def test_dn_rule_matches_generic(seed, n):
    rng = random.Random(seed)
    Q = _random_dn(rng, n)
    beta = tuple(rng.randint(0, 6) for _ in range(n))
    a = dn_canonical(Q, beta, cross_check=False).decomposition
    g = generic_decomposition(Q, beta)
    assert a.same_as(g)
    assert a.total() == beta
    assert ext_vanishes(g)


@given(seed=st.integers(0, 10**6), n=st.integers(2, 6))
@settings(max_examples=25, deadline=None)
def test_an_matches_generic(seed, n):
    rng = random.Random(seed)
    Q = Quiver.from_edges(range(1, n + 1), orient([(i, i + 1) for i in range(1, n)], rng))
    beta = tuple(rng.randint(0, 6) for _ in range(n))
    assert an_decomposition(Q, beta).same_as(generic_decomposition(Q, beta))
