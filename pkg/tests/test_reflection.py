import random

import pytest
from hypothesis import given, settings, strategies as st

from quiverbf.bpoly import FactorProduct, bracket, equal_up_to_scalar
from quiverbf.quiver import Quiver
from quiverbf.reflection import (
    ReflectFail,
    StepError,
    initial_reflect_state,
    is_preinjective,
    is_preprojective,
    run_reflect,
)
from quiverbf.slicing import run_slice

from _support import A2, D4_IN, D5_FOUR, E6, KRONECKER, random_dynkin_instance


def kronecker_expected(n, k):
    out = FactorProduct.unit()
    for i in range(1, n + 1):
        out = out * bracket(i, 1, 2 * k, (i + 1) * k)
    return out


@pytest.mark.parametrize("n,k", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)])
@pytest.mark.parametrize("direction", ["sink", "mixed", "auto"])
def test_kronecker(n, k, direction):
    r = run_reflect(KRONECKER, (n * k, (n + 1) * k), [(n + 1, n + 2)], direction=direction)
    assert r.product == kronecker_expected(n, k)


def test_kronecker_source_direction_hits_cap():
    r = run_reflect(KRONECKER, (1, 2), [(2, 3)], direction="source", cap=50)
    assert isinstance(r, ReflectFail) and not r
    assert r.reason == "cap"


def test_cayley_by_reflection():
    for n in range(1, 5):
        assert run_reflect(A2, (n, n), [(1, 0)]).product == bracket(1, 1, n, n)


@pytest.mark.parametrize("direction", ["sink", "source", "mixed", "auto"])
def test_e6_highest_root(direction):
    r = run_reflect(E6, (2, 2, 2, 2, 2, 4), [(1, 2, 1, 2, 2, 3)], direction=direction)
    assert r.product == bracket(1, 1, 2, 2) ** 5 * bracket(3, 1, 2, 4)
    assert r.product.degree() == 16


@pytest.mark.parametrize("n", [1, 2])
def test_four_weight_d5(n):
    A = [(0, 0, 1, 0, 0), (1, 0, 0, 1, 0), (0, 1, 1, 1, 0), (1, 1, 1, 1, 1)]
    m = (1, 1, 1, 1)
    expected = (bracket((0, 1, 0, 0), m, n, n) * bracket((0, 1, 1, 1), m, n, 2 * n)
                * bracket((0, 0, 0, 1), m, n, n) * bracket((1, 0, 0, 0), m, n, n)
                * bracket((1, 0, 1, 1), m, n, 2 * n) * bracket((0, 0, 1, 0), m, n, n))
    r = run_reflect(D5_FOUR, (n, n, 2 * n, 2 * n, n), A)
    assert r.product == expected
    assert not run_slice(D5_FOUR, (n, n, 2 * n, 2 * n, n), A)


def test_orbit_tests():
    assert not is_preprojective(KRONECKER, (1, 1))
    assert is_preprojective(E6, (1, 2, 1, 2, 2, 3))
    assert is_preinjective(E6, (1, 2, 1, 2, 2, 3))


def test_invalid_input():
    with pytest.raises((ValueError, StepError)):
        initial_reflect_state(A2, (1, 2), [(1, 0)])


def test_trace_records_steps():
    r = run_reflect(D4_IN, (1, 1, 2, 2), [(1, 1, 1, 1)])
    assert r.trace.steps and r.trace.product() == r.product


@given(seed=st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_agrees_with_slicing(seed):
    Q, alpha, beta = random_dynkin_instance(random.Random(seed))
    s = run_slice(Q, beta, [alpha])
    r = run_reflect(Q, beta, [alpha])
    assert r, r.detail
    assert r.product.is_polynomial() and r.product.all_shifts_positive()
    if s:
        assert equal_up_to_scalar(s.product.expand(), r.product.expand()).match


@given(seed=st.integers(0, 10**6), n=st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_multi_exponent_a2(seed, n):
    m = random.Random(seed).randint(1, 3)
    r = run_reflect(A2, (n, n), [(1, 0)], (m,))
    assert r.product == bracket(1, m, n, n)
    assert r.product.degree() == m * n
