import random

import pytest
from hypothesis import given, settings, strategies as st

from quiverbf.bpoly import bracket
from quiverbf.oracle import (
    OracleBudgetError,
    OracleConfig,
    afunction,
    bfunction_oracle,
    factor_linear,
    roots_negative_rational,
    verify,
)
from quiverbf.schofield import build_schofield, random_exceptional, schofield_degree
from quiverbf.slicing import run_slice
from quiverbf.sparsepoly import SparsePoly

from _support import A2, D4_IN, KRONECKER, random_dynkin_instance, semi_invariants


def test_schofield_on_a2_is_a_determinant():
    V = random_exceptional(A2, (1, 0))
    _, f = build_schofield(A2, (2, 2), V)
    assert f.total_degree() == 2 and len(f) == 2
    # det of a generic 2x2 matrix up to scalar
    coeffs = sorted(abs(c) for c in f.terms.values())
    assert coeffs[0] == coeffs[1]


def test_schofield_rejects_nonsquare():
    V = random_exceptional(A2, (1, 0))
    with pytest.raises(ValueError):
        build_schofield(A2, (1, 2), V)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cayley_identity(n):
    (f,) = semi_invariants(A2, (n, n), [(1, 0)])
    res = bfunction_oracle([f])
    assert factor_linear(res.b) is not None
    assert verify(bracket(1, 1, n, n), [f]).match


def test_symbolic_and_pointwise_agree():
    fs = semi_invariants(D4_IN, (1, 1, 2, 2), [(1, 1, 1, 1)])
    a = bfunction_oracle(fs, config=OracleConfig(mode="symbolic", budget=100))
    b = bfunction_oracle(fs, config=OracleConfig(mode="pointwise", budget=100))
    assert a.b == b.b
    assert a.mode == "symbolic" and b.mode == "pointwise"


@pytest.mark.parametrize("Q,beta,alphas,m", [
    (A2, (3, 3), [(1, 0)], (1,)),
    (A2, (2, 2), [(1, 0)], (2,)),
    (D4_IN, (1, 1, 2, 2), [(1, 1, 1, 1)], (1,)),
    (D4_IN, (1, 1, 1, 2), [(0, 1, 1, 1), (1, 0, 1, 1)], (1, 1)),
    (KRONECKER, (1, 2), [(2, 3)], (1,)),
])
def test_degree_identity_and_negative_roots(Q, beta, alphas, m):
    fs = semi_invariants(Q, beta, alphas)
    res = bfunction_oracle(fs, m, OracleConfig(budget=100))
    assert res.b.total_degree() == sum(k * f.total_degree() for f, k in zip(fs, m))
    fac = factor_linear(res.b)
    assert fac is not None and fac.all_shifts_positive()
    if len(fs) == 1:
        assert roots_negative_rational(res.b)


def test_oracle_matches_slice_with_two_weights():
    alphas = [(0, 1, 1, 1), (1, 0, 1, 1)]
    fs = semi_invariants(D4_IN, (1, 1, 1, 2), alphas)
    s = run_slice(D4_IN, (1, 1, 1, 2), alphas, (1, 1))
    assert verify(s.product, fs, (1, 1), OracleConfig(budget=100)).match


def test_budget_is_enforced():
    fs = semi_invariants(A2, (4, 4), [(1, 0)])
    with pytest.raises(OracleBudgetError):
        bfunction_oracle(fs, config=OracleConfig(budget=1, pointwise_factor=1))


def test_mismatch_is_reported():
    (f,) = semi_invariants(A2, (2, 2), [(1, 0)])
    rep = verify(bracket(1, 1, 3, 3), [f])
    assert not rep.match and "MISMATCH" in rep.text()


def test_afunction_of_a_determinant():
    g = SparsePoly(("x11", "x12", "x21", "x22"), {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1})
    (a,) = afunction([g], {"x11": 1, "x12": 0, "x21": 0, "x22": 1})
    s = SparsePoly.var(("s",), "s")
    assert a == s * s


@given(seed=st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_degree_without_expansion(seed):
    Q, alpha, beta = random_dynkin_instance(random.Random(seed), max_entry=2)
    V = random_exceptional(Q, alpha)
    assert schofield_degree(Q, beta, V) == build_schofield(Q, beta, V)[1].total_degree()
