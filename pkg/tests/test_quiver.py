import random

import pytest
from hypothesis import given, settings, strategies as st

from quiverbf.quiver import (
    Quiver,
    Violations,
    apply_matrix,
    classify,
    convert_weight,
    coxeter_by_reflections,
    coxeter_matrix,
    coxeter_number,
    euler_form,
    euler_matrix,
    generic_hom_ext,
    positive_roots,
    reflect,
    validate_quiver,
)

from _support import E6, KRONECKER, dynkin_edges, orient, random_tree


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _power(M, k):
    out = _identity(len(M))
    for _ in range(k):
        out = [[sum(out[i][t] * M[t][j] for t in range(len(M))) for j in range(len(M))] for i in range(len(M))]
    return out


def test_euler_form_kronecker():
    assert euler_matrix(KRONECKER) == [[1, -2], [0, 1]]
    assert euler_form(KRONECKER, (1, 1), (1, 1)) == 0


def test_cycle_rejected():
    Q = Quiver.from_edges([1, 2, 3], [(1, 2), (2, 3), (3, 1)])
    res = validate_quiver(Q)
    assert isinstance(res, Violations)


def test_classification():
    assert str(classify(E6)) == "Dynkin E6"
    assert str(classify(KRONECKER)) == "Euclidean ~A1"
    D4 = Quiver.from_edges([1, 2, 3, 4], [(1, 4), (2, 4), (3, 4)])
    assert str(classify(D4)) == "Dynkin D4"


@pytest.mark.parametrize("kind,n,count", [("A", 3, 6), ("D", 4, 12), ("D", 5, 20), ("E", 6, 36)])
def test_positive_root_counts(kind, n, count):
    Q = Quiver.from_edges(range(1, n + 1), dynkin_edges(kind, n))
    roots = positive_roots(Q)
    assert len(roots) == count
    assert all(euler_form(Q, r, r) == 1 for r in roots)


@pytest.mark.parametrize("kind,n", [("A", 3), ("D", 4), ("D", 5), ("E", 6)])
@given(seed=st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_coxeter_order_is_coxeter_number(kind, n, seed):
    Q = Quiver.from_edges(range(1, n + 1), orient(dynkin_edges(kind, n), random.Random(seed)))
    c = coxeter_matrix(Q)
    h = coxeter_number(classify(Q))
    assert _power(c, h) == _identity(n)
    assert all(_power(c, k) != _identity(n) for k in range(1, h))


@given(seed=st.integers(0, 10**6), n=st.integers(2, 7))
@settings(max_examples=40, deadline=None)
def test_coxeter_two_routes_agree(seed, n):
    Q = random_tree(n, random.Random(seed))
    assert coxeter_matrix(Q) == coxeter_by_reflections(Q)


@given(seed=st.integers(0, 10**6), n=st.integers(2, 7),
       u=st.lists(st.integers(-5, 5), min_size=7, max_size=7),
       v=st.lists(st.integers(-5, 5), min_size=7, max_size=7))
@settings(max_examples=60, deadline=None)
def test_reflection_is_euler_isometry(seed, n, u, v):
    rng = random.Random(seed)
    Q = random_tree(n, rng)
    u, v = tuple(u[:n]), tuple(v[:n])
    x = rng.choice([w for w in Q.vertices if Q.is_sink(w) or Q.is_source(w)])
    Q2, u2, (v2,) = reflect(Q, x, u, [v])
    assert euler_form(Q2, u2, v2) == euler_form(Q, u, v)


@given(seed=st.integers(0, 10**6), n=st.integers(2, 7))
@settings(max_examples=40, deadline=None)
def test_coxeter_is_euler_isometry(seed, n):
    rng = random.Random(seed)
    Q = random_tree(n, rng)
    c = coxeter_matrix(Q)
    u = tuple(rng.randint(-4, 4) for _ in range(n))
    v = tuple(rng.randint(-4, 4) for _ in range(n))
    assert euler_form(Q, apply_matrix(c, u), apply_matrix(c, v)) == euler_form(Q, u, v)
    # <a, b> = -<b, c a>
    assert euler_form(Q, u, v) == -euler_form(Q, v, apply_matrix(c, u))


@given(seed=st.integers(0, 10**6), n=st.integers(2, 7))
@settings(max_examples=40, deadline=None)
def test_weight_forms_round_trip(seed, n):
    rng = random.Random(seed)
    Q = random_tree(n, rng)
    alpha = tuple(rng.randint(-3, 3) for _ in range(n))
    w = convert_weight(Q, alpha=alpha)
    assert w.alpha == alpha
    assert convert_weight(Q, sigma=w.sigma) == w
    assert convert_weight(Q, alphastar=w.alphastar) == w
    beta = tuple(rng.randint(0, 4) for _ in range(n))
    sb = sum(s * b for s, b in zip(w.sigma, beta))
    assert sb == euler_form(Q, alpha, beta) == -euler_form(Q, beta, w.alphastar)


def test_generic_hom_ext_simple():
    A2 = Quiver.from_edges([1, 2], [(1, 2)])
    assert generic_hom_ext(A2, (0, 1), (1, 1)) == (1, 0)
    assert generic_hom_ext(A2, (1, 1), (0, 1)) == (0, 0)
    assert generic_hom_ext(A2, (0, 1), (1, 0)) == (0, 0)
    assert generic_hom_ext(A2, (1, 0), (0, 1)) == (0, 1)
