"""b-functions through castling transforms at sinks and sources.

At a sink x with r1 = beta_x, r2 = c_x(beta)_x and d_i = c_x(alpha^i)_x,

    b_f = b_{c_x f} * [s]^d_{r1} / [s]^d_{r2},

with the two degenerate cases r2 = 0 (x disappears after the step) and
r2 < 0 (no weight may see x; x is dropped with a unit factor).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .bpoly import FactorProduct, bracket
from .quiver import (
    Quiver,
    alpha_from_sigma,
    alphastar_from_sigma,
    apply_matrix,
    coxeter_matrix,
    reflect_quiver,
    reflect_vector,
    sigma_from_alpha,
)
from .slicing import InvalidWeightError, InvariantViolation
from .trace import ReductionTrace, TraceStep

DEFAULT_CAP = 1000


@dataclass(frozen=True)
class ReflectState:
    quiver: Quiver
    beta: tuple
    alphas: tuple  # tuple of alpha vectors aligned with quiver.vertices
    m: tuple
    accumulator: FactorProduct = field(default=None)

    def __post_init__(self):
        if self.accumulator is None:
            object.__setattr__(self, "accumulator", FactorProduct.unit(len(self.alphas)))

    def sigma(self, i: int) -> tuple:
        return sigma_from_alpha(self.quiver, self.alphas[i])

    def all_weights_zero(self) -> bool:
        return all(not any(self.sigma(i)) for i in range(len(self.alphas)))

    def describe(self) -> str:
        Q = self.quiver
        verts = ", ".join(f"{v}:b={b}" for v, b in zip(Q.vertices, self.beta))
        arrows = ", ".join(f"{a.tail}->{a.head}" for a in Q.arrows)
        al = "; ".join(",".join(map(str, a)) for a in self.alphas)
        return f"[{verts}] arrows [{arrows}] alpha [{al}]"


class StepError(ValueError):
    pass


def _drop(state: ReflectState, x, sigmas: Sequence[Sequence[int]] | None = None,
          quiver: Quiver | None = None, beta: Sequence[int] | None = None) -> ReflectState:
    """Remove x, restrict sigma to the rest and re-solve alpha there."""
    Q = quiver or state.quiver
    beta = tuple(beta if beta is not None else state.beta)
    sigmas = sigmas or [sigma_from_alpha(Q, a) for a in state.alphas]
    keep = [i for i, v in enumerate(Q.vertices) if v != x]
    sub = Q.without_vertices([x])
    alphas = tuple(alpha_from_sigma(sub, tuple(s[i] for i in keep)) for s in sigmas)
    return replace(state, quiver=sub, beta=tuple(beta[i] for i in keep), alphas=alphas)


@dataclass(frozen=True)
class Plan:
    """A castling step before its factor is materialised."""
    kind: str
    target: str
    d: tuple
    r1: int
    r2: int
    state: ReflectState

    def factor(self, m) -> FactorProduct:
        if self.kind == "drop":
            return FactorProduct.unit(len(self.d))
        if self.r2 <= 0:
            return bracket(self.d, m, self.r1, self.r1)
        return bracket(self.d, m, self.r1, self.r1) / bracket(self.d, m, self.r2, self.r2)

    def step(self, m, materialise: bool = True) -> TraceStep:
        detail = f"r1={self.r1} r2={self.r2} d={','.join(map(str, self.d))}"
        fac = self.factor(m) if materialise else FactorProduct.unit(len(self.d))
        if self.kind == "drop":
            return TraceStep("drop", self.target, fac, "", detail + " (independent of x)", self.state.describe())
        sym = _ratio_text(self.d, self.r1, self.r2)
        if not materialise:
            detail += " (factor not expanded)"
        return TraceStep(self.kind, self.target, fac, sym, detail, self.state.describe())


def plan_castle(state: ReflectState, x) -> Plan:
    """Castling at the sink x on integer data only; raises StepError if invalid."""
    Q = state.quiver
    if not Q.is_sink(x):
        raise StepError(f"{x} is not a sink")
    i = Q.index(x)
    r1 = state.beta[i]
    if r1 <= 0:
        raise StepError(f"beta at {x} is {r1}")
    new_beta = reflect_vector(Q, x, state.beta)
    r2 = new_beta[i]
    new_alphas = [reflect_vector(Q, x, a) for a in state.alphas]
    d = tuple(a[i] for a in new_alphas)
    if r2 < 0:
        sig = [state.sigma(k)[i] for k in range(len(state.alphas))]
        if any(sig):
            raise StepError(f"c_x(beta)_x = {r2} < 0 at {x} but sigma(x) = {sig}")
        return Plan("drop", str(x), d, r1, r2, _drop(state, x))
    if any(v < 0 for v in d):
        raise StepError(f"negative degree {d} at sink {x}")
    cq = reflect_quiver(Q, x)
    if r2 == 0:
        sigmas = [sigma_from_alpha(cq, a) for a in new_alphas]
        new = _drop(state, x, sigmas, cq, new_beta)
    else:
        new = replace(state, quiver=cq, beta=new_beta, alphas=tuple(new_alphas))
    return Plan("castle", str(x), d, r1, r2, new)


def castle_step(state: ReflectState, x) -> tuple[ReflectState, TraceStep]:
    """One castling transform at the sink x, with its factor folded into the accumulator."""
    plan = plan_castle(state, x)
    fac = plan.factor(state.m)
    new = replace(plan.state, accumulator=state.accumulator * fac)
    step = plan.step(state.m)
    return new, replace(step, snapshot=new.describe())


def _ratio_text(d, r1, r2) -> str:
    sup = str(d[0]) if len(d) == 1 else ",".join(map(str, d))
    sup = "" if sup == "1" else f"^{{{sup}}}"
    num = f"[s]{sup}_{{{r1}}}"
    return num if r2 <= 0 else f"{num}/[s]{sup}_{{{r2}}}"


def _prune(state: ReflectState, log: list) -> ReflectState:
    changed = True
    while changed:
        changed = False
        for v, b in zip(state.quiver.vertices, state.beta):
            if b == 0:
                state = _drop(state, v)
                log.append(TraceStep("drop", str(v), FactorProduct.unit(len(state.alphas)),
                                     detail="dimension 0", snapshot=state.describe()))
                changed = True
                break
    return state


def _try(planner, state: ReflectState, x) -> Plan | None:
    try:
        return planner(state, x)
    except StepError:
        return None


@dataclass(frozen=True)
class ReflectResult:
    product: FactorProduct
    trace: ReductionTrace
    direction: str


@dataclass(frozen=True)
class ReflectFail:
    reason: str  # "cap" or "stuck"
    detail: str
    trace: ReductionTrace

    def __bool__(self) -> bool:
        return False


# a failed run keeps the factors of its first few steps only; later ones can be huge
FAIL_TRACE_FACTORS = 25


def _build_trace(log: list, m, nvars: int, expand_all: bool) -> ReductionTrace:
    trace = ReductionTrace("reflect", nvars)
    for k, item in enumerate(log):
        if isinstance(item, Plan):
            item = item.step(m, materialise=expand_all or k < FAIL_TRACE_FACTORS)
        trace.add(item)
    return trace


def _sink_loop(state: ReflectState, cap: int, direction: str,
               allow_sources: bool = False) -> ReflectResult | ReflectFail:
    log: list = []
    steps = 0
    nv = len(state.alphas)
    while True:
        state = _prune(state, log)
        if state.all_weights_zero():
            trace = _build_trace(log, state.m, nv, True)
            acc = trace.product()
            if not acc.is_polynomial():
                raise InvariantViolation(f"terminal accumulator is not a polynomial: {acc.text()}")
            return ReflectResult(acc, trace, direction)
        if steps >= cap:
            return ReflectFail("cap", f"iteration cap {cap} reached", _build_trace(log, state.m, nv, False))
        Q = state.quiver
        plan = next((p for v in Q.vertices if Q.is_sink(v) for p in [_try(plan_castle, state, v)] if p), None)
        if plan is None and allow_sources:
            plan = next((p for v in Q.vertices if Q.is_source(v) for p in [_try(plan_source, state, v)] if p), None)
        if plan is None:
            what = "sink or source" if allow_sources else "sink"
            return ReflectFail("stuck", f"no {what} admits a castling step", _build_trace(log, state.m, nv, False))
        log.append(plan)
        state = plan.state
        steps += 1


def _to_opposite(state: ReflectState) -> ReflectState:
    # alpha* read as an alpha on Q^op carries the weight -sigma; twice is the identity
    Q = state.quiver
    astars = tuple(alphastar_from_sigma(Q, sigma_from_alpha(Q, a)) for a in state.alphas)
    return replace(state, quiver=Q.opposite(), alphas=astars)


def plan_source(state: ReflectState, x) -> Plan:
    """Castling at a source: the sink step on the opposite quiver with alpha*."""
    if not state.quiver.is_source(x):
        raise StepError(f"{x} is not a source")
    plan = plan_castle(_to_opposite(state), x)
    return replace(plan, kind=plan.kind + "-source", state=_to_opposite(plan.state))


def source_step(state: ReflectState, x) -> tuple[ReflectState, TraceStep]:
    plan = plan_source(state, x)
    new = replace(plan.state, accumulator=state.accumulator * plan.factor(state.m))
    return new, replace(plan.step(state.m), snapshot=new.describe())


def initial_reflect_state(Q: Quiver, beta: Sequence[int], alphas: Sequence[Sequence[int]],
                          m: Sequence[int] | None = None) -> ReflectState:
    alphas = tuple(tuple(a) for a in alphas)
    if not alphas:
        raise InvalidWeightError("at least one weight is required")
    m = tuple(m or (1,) * len(alphas))
    if len(m) != len(alphas):
        raise InvalidWeightError("exponent tuple length differs from the number of weights")
    beta = tuple(beta)
    if len(beta) != Q.n or any(b < 0 for b in beta):
        raise InvalidWeightError("beta must be a nonnegative vector with one entry per vertex")
    for a in alphas:
        val = sum(x * y for x, y in zip(sigma_from_alpha(Q, a), beta))
        if val:
            raise InvalidWeightError(f"sigma(beta) = {val} for alpha {a}; must be 0")
    return ReflectState(Q, beta, alphas, m)


def run_reflect(Q: Quiver, beta: Sequence[int], alphas: Sequence[Sequence[int]],
                m: Sequence[int] | None = None, direction: str = "auto",
                cap: int = DEFAULT_CAP) -> ReflectResult | ReflectFail:
    """Reduce to a constant by castling; direction is sink, source, mixed or auto."""
    state = initial_reflect_state(Q, beta, alphas, m)
    if direction == "sink":
        return _sink_loop(state, cap, "sink")
    if direction == "source":
        # the dual semi-invariant lives on the opposite quiver with weight <alpha*, .>
        op = _to_opposite(state)
        return _sink_loop(op, cap, "source")
    if direction == "mixed":
        return _sink_loop(state, cap, "mixed", True)
    if direction != "auto":
        raise ValueError(f"unknown direction {direction}")
    fails = []
    for d in ("sink", "source", "mixed"):
        res = run_reflect(Q, beta, alphas, m, d, cap)
        if res:
            return res
        fails.append(f"{d}: {res.reason} ({res.detail})")
    return ReflectFail("stuck", "; ".join(fails), res.trace)


# --- preprojective / preinjective ------------------------------------------------

@dataclass(frozen=True)
class OrbitTest:
    value: bool
    capped: bool
    iterations: int

    def __bool__(self) -> bool:
        return self.value


def _inverse_int(M):
    from fractions import Fraction

    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [[int(x) for x in row[n:]] for row in A]


def _orbit_leaves_cone(M, alpha, cap: int) -> OrbitTest:
    v = tuple(alpha)
    seen = {v}
    for k in range(1, cap + 1):
        v = apply_matrix(M, v)
        if any(x < 0 for x in v):
            return OrbitTest(True, False, k)
        if v in seen:
            return OrbitTest(False, False, k)
        seen.add(v)
    return OrbitTest(False, True, cap)


def is_preprojective(Q: Quiver, alpha: Sequence[int], cap: int = DEFAULT_CAP) -> OrbitTest:
    return _orbit_leaves_cone(coxeter_matrix(Q), alpha, cap)


def is_preinjective(Q: Quiver, alpha: Sequence[int], cap: int = DEFAULT_CAP) -> OrbitTest:
    return _orbit_leaves_cone(_inverse_int(coxeter_matrix(Q)), alpha, cap)
