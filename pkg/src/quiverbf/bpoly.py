"""Factored b-functions: signed multisets of affine-linear factors.

A :class:`LinearFactor` is ``d_1 s_1 + ... + d_l s_l + c``.  A
:class:`FactorProduct` is a nonzero scalar times a product of such factors
with signed multiplicities, so ratios of brackets cancel mechanically.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .sparsepoly import SparsePoly


@dataclass(frozen=True, order=True)
class LinearFactor:
    coeffs: tuple[int, ...]
    shift: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "shift", Fraction(self.shift))
        if any(c < 0 for c in self.coeffs) or not any(self.coeffs):
            raise ValueError(f"invalid factor coefficients {self.coeffs}")

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def text(self, names: Sequence[str] | None = None) -> str:
        names = names or default_names(self.nvars)
        parts = []
        for c, n in zip(self.coeffs, names):
            if c:
                parts.append(n if c == 1 else f"{c}{n}")
        body = "+".join(parts)
        if self.shift > 0:
            body += f"+{self.shift}"
        elif self.shift < 0:
            body += f"{self.shift}"
        return f"({body})"

    def as_poly(self, gens: Sequence[str]) -> SparsePoly:
        p = SparsePoly.const(gens, self.shift)
        for i, c in enumerate(self.coeffs):
            if c:
                p = p + SparsePoly.var(gens, gens[i]).scale(c)
        return p


def default_names(l: int) -> tuple[str, ...]:
    return ("s",) if l == 1 else tuple(f"s{i}" for i in range(1, l + 1))


@dataclass(frozen=True)
class FactorProduct:
    nvars: int = 1
    scalar: Fraction = Fraction(1)
    factors: tuple = field(default=())  # sorted (LinearFactor, multiplicity) pairs, no zeros

    def __post_init__(self):
        object.__setattr__(self, "scalar", Fraction(self.scalar))
        if self.scalar == 0:
            raise ValueError("FactorProduct scalar must be nonzero")
        merged: Counter = Counter()
        for f, k in self.factors:
            if f.nvars != self.nvars:
                raise ValueError("factor arity mismatch")
            merged[f] += k
        object.__setattr__(self, "factors", tuple(sorted((f, k) for f, k in merged.items() if k)))

    @classmethod
    def unit(cls, nvars: int = 1) -> "FactorProduct":
        return cls(nvars)

    @classmethod
    def from_factors(cls, factors: Iterable[LinearFactor], scalar=1, nvars: int | None = None) -> "FactorProduct":
        factors = list(factors)
        if nvars is None:
            nvars = factors[0].nvars if factors else 1
        return cls(nvars, Fraction(scalar), tuple(Counter(factors).items()))

    def multiplicities(self) -> dict:
        return dict(self.factors)

    def is_polynomial(self) -> bool:
        return all(k > 0 for _, k in self.factors)

    def is_unit(self) -> bool:
        return not self.factors

    def degree(self) -> int:
        return sum(k for _, k in self.factors)

    def __mul__(self, other: "FactorProduct") -> "FactorProduct":
        self._check(other)
        return FactorProduct(self.nvars, self.scalar * other.scalar, self.factors + other.factors)

    def __truediv__(self, other: "FactorProduct") -> "FactorProduct":
        self._check(other)
        inv = tuple((f, -k) for f, k in other.factors)
        return FactorProduct(self.nvars, self.scalar / other.scalar, self.factors + inv)

    def __pow__(self, k: int) -> "FactorProduct":
        return FactorProduct(self.nvars, self.scalar**k, tuple((f, m * k) for f, m in self.factors))

    def scaled(self, c) -> "FactorProduct":
        return FactorProduct(self.nvars, self.scalar * Fraction(c), self.factors)

    def _check(self, other):
        if not isinstance(other, FactorProduct) or other.nvars != self.nvars:
            raise ValueError("incompatible factor products")

    def roots(self) -> list[Fraction]:
        """Roots of a one-variable product, with multiplicity."""
        if self.nvars != 1:
            raise ValueError("roots are defined for one variable")
        out = []
        for f, k in self.factors:
            out.extend([-f.shift / f.coeffs[0]] * k)
        return sorted(out)

    def all_shifts_positive(self) -> bool:
        return all(f.shift > 0 for f, _ in self.factors)

    def expand(self, names: Sequence[str] | None = None) -> SparsePoly:
        if not self.is_polynomial():
            raise ValueError("cannot expand a product with negative multiplicities")
        gens = tuple(names or default_names(self.nvars))
        p = SparsePoly.const(gens, self.scalar)
        for f, k in self.factors:
            p = p * (f.as_poly(gens) ** k)
        return p

    def text(self, names: Sequence[str] | None = None, brackets: bool = True, sep: str = "*") -> str:
        """Render as a product; runs of consecutive shifts with equal coefficients
        collapse into ``[s]^{d}_{a,b}`` when ``brackets`` is set."""
        names = names or default_names(self.nvars)
        pieces = []
        if self.scalar != 1 or not self.factors:
            pieces.append(str(self.scalar))
        for coeffs, group in _group_by_coeffs(self.factors):
            if brackets and all(k > 0 for _, k in group) and _all_integral(group):
                pieces.extend(_bracket_runs(coeffs, group, names))
            else:
                for f, k in group:
                    pieces.append(f.text(names) + (f"^{k}" if k != 1 else ""))
        return sep.join(pieces)

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "scalar": str(self.scalar),
            "factors": [
                {"coeffs": list(f.coeffs), "shift": str(f.shift), "multiplicity": k}
                for f, k in self.factors
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FactorProduct":
        fs = tuple(
            (LinearFactor(tuple(d["coeffs"]), Fraction(d["shift"])), int(d["multiplicity"]))
            for d in data["factors"]
        )
        return cls(int(data["nvars"]), Fraction(data["scalar"]), fs)

    def __str__(self) -> str:
        return self.text()


def _group_by_coeffs(factors):
    groups: dict = {}
    for f, k in factors:
        groups.setdefault(f.coeffs, []).append((f, k))
    return sorted(groups.items())


def _all_integral(group) -> bool:
    return all(f.shift.denominator == 1 for f, _ in group)


def _bracket_runs(coeffs, group, names):
    # Only coefficient vectors with total 1 are plain runs (s+i); others stay explicit.
    if sum(coeffs) != 1:
        return [f.text(names) + (f"^{k}" if k != 1 else "") for f, k in group]
    counts = Counter({int(f.shift): k for f, k in group})
    var = names[coeffs.index(1)] if len(coeffs) > 1 else names[0]
    runs: Counter = Counter()
    while counts:
        start = min(counts)
        end = start
        while counts.get(end + 1):
            end += 1
        for c in range(start, end + 1):
            counts[c] -= 1
            if not counts[c]:
                del counts[c]
        runs[(start, end)] += 1
    out = []
    for (start, end), k in runs.items():
        length = end - start + 1
        if length == 1:
            sign = "+" if start >= 0 else ""
            body = f"({var}{sign}{start})" if start else f"{var}"
        elif start == 1:
            body = f"[{var}]_{{{end}}}"
        else:
            body = f"[{var}]_{{{length},{end}}}"
        out.append(body + (f"^{k}" if k > 1 else ""))
    return out


def bracket(d: Sequence[int] | int, m: Sequence[int] | int, a: int, b: int) -> FactorProduct:
    """[s]^{d_1..d_l}_{a,b} with exponent tuple m: prod over i in [b-a+1, b], j < sum m_i d_i."""
    d = (d,) if isinstance(d, int) else tuple(d)
    m = (m,) if isinstance(m, int) else tuple(m)
    if len(d) != len(m):
        raise ValueError("d and m must have the same length")
    if a > b:
        raise ValueError(f"bracket needs a <= b, got a={a}, b={b}")
    if a < 0 or any(x < 0 for x in d + m):
        raise ValueError("bracket parameters must be nonnegative")
    D = sum(x * y for x, y in zip(d, m))
    nv = len(d)
    if D == 0 or a == 0:
        return FactorProduct.unit(nv)
    factors = Counter()
    for i in range(b - a + 1, b + 1):
        for j in range(D):
            factors[LinearFactor(d, i + j)] += 1
    return FactorProduct(nv, Fraction(1), tuple(factors.items()))


def bracket_ratio(d, m, r1: int, r2: int) -> FactorProduct:
    """[s]^d_{r1} / [s]^d_{r2}; nonpositive r2 contributes nothing."""
    return bracket(d, m, r1, r1) / bracket(d, m, max(r2, 0), max(r2, 0))


@dataclass(frozen=True)
class ScalarMatch:
    match: bool
    scalar: Fraction | None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.match


def equal_up_to_scalar(p: FactorProduct | SparsePoly, q: FactorProduct | SparsePoly) -> ScalarMatch:
    """Decide p = lambda * q; lambda is the ratio of the lexicographically leading coefficients."""
    if isinstance(p, FactorProduct):
        p = p.expand(q.gens if isinstance(q, SparsePoly) else None)
    if isinstance(q, FactorProduct):
        q = q.expand(p.gens)
    if p.gens != q.gens:
        gens = tuple(dict.fromkeys(p.gens + q.gens))
        p, q = p.with_gens(gens), q.with_gens(gens)
    if p.is_zero() or q.is_zero():
        return ScalarMatch(p.is_zero() and q.is_zero(), None, "zero polynomial")
    e, c = q.leading()
    lam = Fraction(p.terms.get(e, 0)) / c
    if lam == 0:
        return ScalarMatch(False, None, f"leading monomial {e} missing on the left")
    diff = p - q.scale(lam)
    if diff.is_zero():
        return ScalarMatch(True, lam)
    bad = max(diff.terms)
    return ScalarMatch(
        False, None,
        f"coefficient of {bad}: {p.terms.get(bad, 0)} vs {lam}*{q.terms.get(bad, 0)}",
    )
