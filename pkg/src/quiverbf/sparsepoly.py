"""Exact sparse multivariate polynomials over the rationals.

A polynomial carries its generator names; exponent vectors are dense
tuples aligned with them.  Coefficients are ints or Fractions and zero
coefficients are never stored.
"""
from __future__ import annotations

from fractions import Fraction
from math import prod
from numbers import Rational
from typing import Iterable, Mapping, Sequence

Coeff = int | Fraction


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class SparsePoly:
    __slots__ = ("gens", "terms")

    def __init__(self, gens: Sequence[str], terms: Mapping[tuple, Coeff] | None = None):
        self.gens = tuple(gens)
        self.terms = {}
        for e, c in (terms or {}).items():
            if c:
                self.terms[tuple(e)] = _norm(c)

    # constructors
    @classmethod
    def const(cls, gens: Sequence[str], c: Coeff) -> "SparsePoly":
        return cls(gens, {(0,) * len(gens): c})

    @classmethod
    def var(cls, gens: Sequence[str], name: str) -> "SparsePoly":
        gens = tuple(gens)
        i = gens.index(name)
        return cls(gens, {tuple(int(k == i) for k in range(len(gens))): 1})

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Coeff:
        return self.terms.get((0,) * len(self.gens), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def leading(self) -> tuple[tuple, Coeff]:
        e = max(self.terms)
        return e, self.terms[e]

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.gens == other.gens and self.terms == other.terms
        if isinstance(other, Rational):
            return self == SparsePoly.const(self.gens, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"SparsePoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(g if k == 1 else f"{g}^{k}" for g, k in zip(self.gens, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic
    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.gens != self.gens:
                raise ValueError("generator mismatch")
            return other
        if isinstance(other, Rational):
            return SparsePoly.const(self.gens, other)
        raise TypeError(f"cannot combine SparsePoly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return SparsePoly(self.gens, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c: Coeff) -> "SparsePoly":
        if not c:
            return SparsePoly(self.gens)
        return SparsePoly(self.gens, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Rational):
            return self.scale(other)
        other = self._coerce(other)
        if len(self.terms) > len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out: dict = {}
        get = out.get
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return SparsePoly(self.gens, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = SparsePoly.const(self.gens, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # calculus
    def derivative(self, i: int) -> "SparsePoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return SparsePoly(self.gens, out)

    def apply_as_operator(self, target: "SparsePoly") -> "SparsePoly":
        """Substitute each generator x by d/dx and apply the result to ``target``."""
        target = self._coerce(target)
        out: dict = {}
        get = out.get
        ops = list(self.terms.items())
        for e2, c2 in target.terms.items():
            for e1, c1 in ops:
                if any(a > b for a, b in zip(e1, e2)):
                    continue
                falling = 1
                for a, b in zip(e1, e2):
                    for t in range(a):
                        falling *= b - t
                e = tuple(b - a for a, b in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2 * falling
        return SparsePoly(self.gens, out)

    def evaluate(self, point: Mapping[str, Coeff] | Sequence[Coeff]) -> Coeff:
        if isinstance(point, Mapping):
            vals = [point[g] for g in self.gens]
        else:
            vals = list(point)
        total = 0
        for e, c in self.terms.items():
            total += c * prod(v**k for v, k in zip(vals, e) if k)
        return _norm(Fraction(total)) if isinstance(total, Fraction) else total

    def substitute(self, images: Mapping[str, "SparsePoly"], new_gens: Sequence[str]) -> "SparsePoly":
        """Replace each generator by a polynomial over ``new_gens``."""
        new_gens = tuple(new_gens)
        result = SparsePoly(new_gens)
        cache: dict = {}
        for e, c in self.terms.items():
            term = SparsePoly.const(new_gens, c)
            for g, k in zip(self.gens, e):
                if k:
                    key = (g, k)
                    if key not in cache:
                        cache[key] = images[g] ** k
                    term = term * cache[key]
            result = result + term
        return result

    def with_gens(self, gens: Sequence[str]) -> "SparsePoly":
        """Re-express over a superset of the generators."""
        gens = tuple(gens)
        pos = [gens.index(g) for g in self.gens]
        out = {}
        for e, c in self.terms.items():
            f = [0] * len(gens)
            for p, k in zip(pos, e):
                f[p] = k
            out[tuple(f)] = c
        return SparsePoly(gens, out)

    def exact_scalar_quotient(self, other: "SparsePoly") -> Coeff | None:
        """Return lambda with self == lambda*other, or None when no such scalar exists."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return 0
        if set(self.terms) != set(other.terms):
            return None
        e, c = other.leading()
        lam = Fraction(self.terms[e]) / c
        for f, d in other.terms.items():
            if self.terms[f] != lam * d:
                return None
        return _norm(lam)


def gens_union(polys: Iterable[SparsePoly]) -> tuple[str, ...]:
    seen: dict = {}
    for p in polys:
        for g in p.gens:
            seen.setdefault(g, None)
    return tuple(seen)


def determinant(matrix: Sequence[Sequence], gens: Sequence[str]) -> SparsePoly:
    """Symbolic determinant.

    Constant pivots are eliminated first (adding polynomial multiples of a
    row to another leaves the determinant unchanged); the remainder is
    expanded by memoised Laplace expansion, sparsest rows first.
    """
    gens = tuple(gens)
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise ValueError("determinant of a non-square matrix")

    def lift(x):
        if isinstance(x, SparsePoly):
            return x
        return SparsePoly.const(gens, x)

    rows = []
    for r in matrix:
        d = {}
        for j, x in enumerate(r):
            x = lift(x)
            if not x.is_zero():
                d[j] = x
        rows.append(d)
    cols = list(range(n))
    factor: Coeff = 1

    # constant-pivot elimination
    while True:
        best = None
        col_count = {j: 0 for j in cols}
        for d in rows:
            for j in d:
                col_count[j] += 1
        if any(c == 0 for c in col_count.values()):
            return SparsePoly(gens)
        for i, d in enumerate(rows):
            for j, x in d.items():
                if x.is_constant():
                    key = (col_count[j], len(d))
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, i, j = best
        pivot_row = rows.pop(i)
        c = pivot_row[j].constant_value()
        # sign of moving row i and column j to the front
        sign = (-1) ** (i + cols.index(j))
        factor = factor * c * sign
        inv = Fraction(1) / c
        for d in rows:
            if j in d:
                mult = d.pop(j).scale(inv)
                for k, y in pivot_row.items():
                    if k == j:
                        continue
                    v = d.get(k)
                    v = (-(mult * y)) if v is None else v - mult * y
                    if v.is_zero():
                        d.pop(k, None)
                    else:
                        d[k] = v
        cols.remove(j)
        if not rows:
            return SparsePoly.const(gens, factor)

    # Laplace expansion with memoisation on the remaining column set
    order = sorted(range(len(rows)), key=lambda i: len(rows[i]))
    rows = [rows[i] for i in order]
    # reordering rows changes the sign by the permutation parity
    factor *= _perm_sign(order)
    memo: dict = {}

    def minor(depth: int, remaining: tuple) -> SparsePoly:
        if depth == len(rows):
            return SparsePoly.const(gens, 1)
        key = remaining
        if key in memo:
            return memo[key]
        total = SparsePoly(gens)
        row = rows[depth]
        for pos, j in enumerate(remaining):
            x = row.get(j)
            if x is None:
                continue
            sub = minor(depth + 1, remaining[:pos] + remaining[pos + 1:])
            if sub.is_zero():
                continue
            term = x * sub
            total = total - term if pos % 2 else total + term
        memo[key] = total
        return total

    return minor(0, tuple(cols)).scale(factor)


def _perm_sign(perm: Sequence[int]) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
