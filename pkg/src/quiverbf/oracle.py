"""Brute-force b-functions from the defining identity f*(d) f^(s+m) = b(s) f^s.

The identity is a polynomial identity in s, so it is evaluated at integer
exponents N on a simplex grid and the values are interpolated.  Two
evaluation modes exist:

* ``symbolic`` applies the operator to the full power and checks that the
  result is an exact scalar multiple of f^N;
* ``pointwise`` only needs the value at one point x0, read off the Taylor
  expansion of f^(N+m) around x0 through a binomial series in N.  Exact division cannot
  be observed there, so the value is recomputed at a second point and the
  two must agree.
"""
from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial
from typing import Mapping, Sequence

import flint

from .bpoly import FactorProduct, LinearFactor, default_names, equal_up_to_scalar
from .sparsepoly import SparsePoly

BUDGET_ENV = "QUIVERBF_ORACLE_BUDGET"
DEFAULT_BUDGET = 20


class OracleError(RuntimeError):
    pass


class OracleBudgetError(OracleError):
    pass


class InexactDivisionError(OracleError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    budget: int | None = None  # symbolic cost cap; None reads the environment
    pointwise_factor: int = 10  # pointwise cap is this multiple of the budget
    mode: str = "auto"  # auto | symbolic | pointwise
    seed: int = 42

    def symbolic_budget(self) -> int:
        if self.budget is not None:
            return self.budget
        return int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))


def cost_from_degrees(degrees: Sequence[int], m: Sequence[int]) -> int:
    # sum m_i deg(f_i)^2, scaled by the simplex size relative to one variable
    base = sum(k * d * d for d, k in zip(degrees, m))
    l, D = len(degrees), sum(k * d for d, k in zip(degrees, m))
    return base * math.comb(D + l, l) // (D + 1)


def oracle_cost(fs: Sequence[SparsePoly], m: Sequence[int]) -> int:
    return cost_from_degrees([f.total_degree() for f in fs], m)


def check_budget(degrees: Sequence[int], m: Sequence[int], config: "OracleConfig | None" = None) -> None:
    """Raise OracleBudgetError early, before any polynomial is built."""
    config = config or OracleConfig()
    budget = config.symbolic_budget()
    cap = budget if config.mode == "symbolic" else budget * config.pointwise_factor
    cost = cost_from_degrees(degrees, m)
    if cost > cap:
        raise OracleBudgetError(f"oracle cost {cost} exceeds budget {cap}")


def _common_gens(fs):
    gens = fs[0].gens
    if any(f.gens != gens for f in fs):
        raise ValueError("all polynomials must share one generator tuple")
    return gens


def choose_mode(fs, m, config: OracleConfig) -> str:
    cost = oracle_cost(fs, m)
    budget = config.symbolic_budget()
    if config.mode == "symbolic":
        if cost > budget:
            raise OracleBudgetError(f"oracle cost {cost} exceeds budget {budget}")
        return "symbolic"
    if config.mode == "pointwise":
        if cost > budget * config.pointwise_factor:
            raise OracleBudgetError(f"oracle cost {cost} exceeds pointwise budget")
        return "pointwise"
    if cost <= budget:
        return "symbolic"
    if cost <= budget * config.pointwise_factor:
        return "pointwise"
    raise OracleBudgetError(f"oracle cost {cost} exceeds budget {budget * config.pointwise_factor}")


# --- evaluation at one exponent -------------------------------------------

def _operator(fs, m) -> SparsePoly:
    op = SparsePoly.const(fs[0].gens, 1)
    for f, k in zip(fs, m):
        op = op * f**k
    return op


def symbolic_value(fs, m, N, op=None) -> Fraction:
    """b(N) from exact differentiation and exact division by prod f_i^N_i."""
    op = op or _operator(fs, m)
    big = SparsePoly.const(fs[0].gens, 1)
    small = SparsePoly.const(fs[0].gens, 1)
    for f, k, n in zip(fs, m, N):
        big = big * f ** (n + k)
        small = small * f**n
    g = op.apply_as_operator(big)
    lam = g.exact_scalar_quotient(small)
    if lam is None:
        raise InexactDivisionError(f"operator image at N={tuple(N)} is not a multiple of f^N")
    return Fraction(lam)


def _sub_box(e) -> list[tuple]:
    return list(product(*(range(k + 1) for k in e)))


def _leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _box_mul(a: dict, b: dict, top) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if _leq(e, top):
                out[e] = out.get(e, 0) + c1 * c2
    return out


def _shifted_in_box(f: SparsePoly, x0: Sequence[int], top) -> dict:
    """Coefficients of f(x0 + y) at exponents <= top."""
    out: dict = {}
    for e, c in f.terms.items():
        ranges = [range(min(k, t) + 1) for k, t in zip(e, top)]
        for sub in product(*ranges):
            coef = c
            for k, j, x in zip(e, sub, x0):
                if j < k:
                    coef *= comb(k, j) * x ** (k - j)
            out[sub] = out.get(sub, 0) + coef
    return {e: c for e, c in out.items() if c}


@dataclass(frozen=True)
class PointTable:
    """N-independent data for evaluating b(N) at x0.

    With f_i(x0 + y) = c_i (1 + h_i(y)), the y^e coefficient of prod f_i^(M_i)
    is prod c_i^M_i * sum_k prod binom(M_i, k_i) [y^e] prod h_i^k_i, and only
    k with |k| <= |e| contribute.
    """
    x0: tuple
    consts: tuple
    terms: tuple  # (op coefficient * e!, {k: [y^e] prod h_i^k_i})


def point_table(fs, m, x0, op=None) -> PointTable:
    op = op or _operator(fs, m)
    consts = tuple(Fraction(f.evaluate(x0)) for f in fs)
    if any(c == 0 for c in consts):
        raise OracleError(f"a polynomial vanishes at {tuple(x0)}")
    l = len(fs)
    zero = (0,) * len(x0)
    terms = []
    for e, a in op.terms.items():
        deg = sum(e)
        powers = []
        for f, c in zip(fs, consts):
            h = {k: Fraction(v) / c for k, v in _shifted_in_box(f, x0, e).items() if k != zero}
            row = [{zero: Fraction(1)}]
            for _ in range(deg):
                row.append(_box_mul(row[-1], h, e))
            powers.append(row)
        coeffs = {}
        for k in product(range(deg + 1), repeat=l):
            if sum(k) > deg:
                continue
            acc = powers[0][k[0]]
            for i in range(1, l - 1):
                acc = _box_mul(acc, powers[i][k[i]], e)
            if l == 1:
                val = acc.get(e, 0)
            else:
                last = powers[l - 1][k[l - 1]]
                val = sum(c1 * last.get(tuple(x - y for x, y in zip(e, e1)), 0) for e1, c1 in acc.items())
            if val:
                coeffs[k] = val
        terms.append((a * _factorials(e), coeffs))
    return PointTable(tuple(x0), consts, tuple(terms))


def _binom(n: int, k: int) -> int:
    return comb(n, k) if n >= 0 else (-1) ** k * comb(k - n - 1, k)


def pointwise_value(fs, m, N, x0, op=None, table: PointTable | None = None) -> Fraction:
    """b(N) = [op(d) prod f^(N+m)](x0) / prod f(x0)^N, via the binomial expansion at x0."""
    table = table or point_table(fs, m, x0, op)
    total = Fraction(0)
    for weight, coeffs in table.terms:
        inner = Fraction(0)
        for k, v in coeffs.items():
            b = 1
            for n, mi, ki in zip(N, m, k):
                b *= _binom(n + mi, ki)
            inner += b * v
        total += weight * inner
    scale = Fraction(1)
    for c, mi in zip(table.consts, m):
        scale *= c**mi
    return total * scale


def _factorials(e) -> int:
    out = 1
    for k in e:
        out *= factorial(k)
    return out


def _nonvanishing_point(fs, rng, tries: int = 50) -> tuple[int, ...]:
    nv = len(fs[0].gens)
    for _ in range(tries):
        x0 = tuple(rng.randint(-9, 9) for _ in range(nv))
        if all(f.evaluate(x0) != 0 for f in fs):
            return x0
    raise OracleError("could not find a point where every f_i is nonzero")


# --- interpolation ----------------------------------------------------------

def simplex(l: int, D: int):
    """Integer tuples N >= 0 with |N| <= D, graded."""
    for total in range(D + 1):
        for N in product(range(total + 1), repeat=l):
            if sum(N) == total:
                yield N


def newton_interpolate(values: Mapping[tuple, Fraction], l: int, D: int, names=None) -> SparsePoly:
    """The unique polynomial of total degree <= D through the simplex values."""
    names = tuple(names or default_names(l))
    pts = list(simplex(l, D))
    result = SparsePoly(names)
    binom_cache: dict = {}

    def binom_poly(i, k):
        key = (i, k)
        if key not in binom_cache:
            s = SparsePoly.var(names, names[i])
            p = SparsePoly.const(names, Fraction(1, factorial(k)))
            for t in range(k):
                p = p * (s - t)
            binom_cache[key] = p
        return binom_cache[key]

    for k in pts:
        diff = Fraction(0)
        for j in product(*(range(x + 1) for x in k)):
            sign = -1 if (sum(k) - sum(j)) % 2 else 1
            w = 1
            for a, b in zip(k, j):
                w *= comb(a, b)
            diff += sign * w * values[j]
        if diff:
            term = SparsePoly.const(names, diff)
            for i, ki in enumerate(k):
                if ki:
                    term = term * binom_poly(i, ki)
            result = result + term
    return result


@dataclass(frozen=True)
class OracleResult:
    b: SparsePoly
    mode: str
    degree_bound: int
    points: int


def bfunction_oracle(fs: Sequence[SparsePoly], m: Sequence[int] | None = None,
                     config: OracleConfig | None = None) -> OracleResult:
    """Interpolate b_m(s) from its values on the simplex |N| <= sum m_i deg f_i."""
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one polynomial")
    _common_gens(fs)
    m = tuple(m or (1,) * len(fs))
    if len(m) != len(fs):
        raise ValueError("exponent tuple length differs from the number of polynomials")
    if any(f.is_zero() for f in fs):
        raise OracleError("a semi-invariant is identically zero")
    config = config or OracleConfig()
    mode = choose_mode(fs, m, config)
    l = len(fs)
    D = sum(k * f.total_degree() for f, k in zip(fs, m))
    op = _operator(fs, m)
    values: dict = {}
    if mode == "symbolic":
        for N in simplex(l, D):
            values[N] = symbolic_value(fs, m, N, op)
    else:
        rng = random.Random(config.seed)
        x1, x2 = _nonvanishing_point(fs, rng), _nonvanishing_point(fs, rng)
        t1, t2 = point_table(fs, m, x1, op), point_table(fs, m, x2, op)
        for N in simplex(l, D):
            v1 = pointwise_value(fs, m, N, x1, table=t1)
            v2 = pointwise_value(fs, m, N, x2, table=t2)
            if v1 != v2:
                raise InexactDivisionError(f"pointwise values disagree at N={N}: {v1} vs {v2}")
            values[N] = v1
    b = newton_interpolate(values, l, D)
    return OracleResult(b, mode, D, len(values))


# --- factoring and comparison -----------------------------------------------

def factor_linear(p: SparsePoly) -> FactorProduct | None:
    """Factor over Q; None unless every factor is affine with nonnegative integer-proportional slope."""
    if p.is_zero():
        return None
    gens = p.gens
    ctx = flint.fmpq_mpoly_ctx.get(tuple(gens))
    fp = ctx.from_dict({e: flint.fmpq(Fraction(c).numerator, Fraction(c).denominator) for e, c in p.terms.items()})
    scalar, parts = fp.factor()
    scalar = Fraction(int(scalar.p), int(scalar.q))
    factors = []
    for q, k in parts:
        d = {tuple(e): Fraction(int(c.p), int(c.q)) for e, c in q.to_dict().items()}
        if any(sum(e) > 1 for e in d):
            return None
        zero = (0,) * len(gens)
        lin = [d.get(tuple(int(i == j) for j in range(len(gens))), Fraction(0)) for i in range(len(gens))]
        shift = d.get(zero, Fraction(0))
        # scale so the slope is a primitive nonnegative integer vector
        den = 1
        for c in lin:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in lin]
        g = 0
        for c in ints:
            g = _gcd(g, abs(c))
        if g == 0:
            return None
        if any(c < 0 for c in ints):
            if any(c > 0 for c in ints):
                return None
            ints = [-c for c in ints]
            den = -den
        ints = [c // g for c in ints]
        unit = Fraction(den, g)
        scalar /= unit**k
        factors.extend([LinearFactor(tuple(ints), shift * unit)] * k)
    return FactorProduct.from_factors(factors, scalar, nvars=len(gens))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def roots_negative_rational(p: SparsePoly) -> bool:
    fp = factor_linear(p)
    return fp is not None and all(f.shift > 0 for f, _ in fp.factors)


@dataclass(frozen=True)
class VerifyReport:
    match: bool
    scalar: Fraction | None
    detail: str
    oracle: OracleResult

    def text(self) -> str:
        if self.match:
            return f"oracle: match (scalar {self.scalar})"
        return f"oracle: MISMATCH ({self.detail})"


def verify(closed: FactorProduct, fs: Sequence[SparsePoly], m: Sequence[int] | None = None,
           config: OracleConfig | None = None) -> VerifyReport:
    """Compare an engine's product with the oracle, up to a nonzero scalar.

    The scalar reported is lambda with oracle = lambda * closed.
    """
    if not closed.is_polynomial():
        raise ValueError("closed form has negative multiplicities")
    res = bfunction_oracle(fs, m, config)
    cmp = equal_up_to_scalar(res.b, closed.expand(res.b.gens))
    return VerifyReport(cmp.match, cmp.scalar, cmp.detail, res)


# --- a-function ---------------------------------------------------------------

def afunction(fs: Sequence[SparsePoly], A0: Mapping[str, int | Fraction],
              names: Sequence[str] | None = None) -> list[SparsePoly]:
    """a_k(s) = f_k(A0) * f_k(sum_i s_i grad log f_i(A0)) for every k."""
    fs = list(fs)
    gens = _common_gens(fs)
    names = tuple(names or default_names(len(fs)))
    vals = [Fraction(f.evaluate(A0)) for f in fs]
    if any(v == 0 for v in vals):
        bad = [i + 1 for i, v in enumerate(vals) if v == 0]
        raise ValueError(f"f_i(A0) = 0 for i in {bad}")
    images = {}
    for j, x in enumerate(gens):
        form = SparsePoly(names)
        for i, f in enumerate(fs):
            g = Fraction(f.derivative(j).evaluate(A0)) / vals[i]
            if g:
                form = form + SparsePoly.var(names, names[i]).scale(g)
        images[x] = form
    return [f.substitute(images, names).scale(v) for f, v in zip(fs, vals)]
