"""Arrow slicing with support pruning.

Weights are carried as sigma vectors (one dict per weight), because every
rule of the engine is a local edit of sigma; alpha and alpha* are solved
from sigma on the current quiver when a rule needs them.

Besides the numeric state, each vertex carries
  * a symbolic label: a linear combination of the original dimensions,
    used only to print factors the way they read in hand computations;
  * a content: a multiset of atoms (original vertices or split copies),
    from which the locally semi-simple representative is rebuilt.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field, replace
from itertools import product as iproduct
from typing import Callable, Sequence

from .bpoly import FactorProduct, bracket
from .quiver import (
    Arrow,
    Quiver,
    alpha_from_sigma,
    alphastar_from_sigma,
    sigma_from_alpha,
)
from .trace import ReductionTrace, TraceStep


class InvalidWeightError(ValueError):
    pass


class VanishingError(ValueError):
    """The data force the semi-invariant to be identically zero."""


class InvariantViolation(AssertionError):
    pass


# --- ordering -----------------------------------------------------------------

def arrow_sort_key(arrow_id: str):
    """Natural order on the base id; derived arrows (primes) sort before their parent."""
    base = arrow_id.rstrip("'")
    primes = len(arrow_id) - len(base)
    parts = tuple((0, int(t), "") if t.isdigit() else (1, 0, t) for t in re.findall(r"\d+|\D+", base))
    return parts, -primes


# --- state --------------------------------------------------------------------

@dataclass(frozen=True)
class SplitRecord:
    rule: str
    vertex: object
    parent_content: tuple
    atoms: tuple
    dim: int
    alpha_zero: bool


@dataclass(frozen=True)
class SliceState:
    quiver: Quiver
    beta: dict
    sigmas: tuple  # tuple of dicts vertex -> sigma value
    m: tuple
    labels: dict = field(default_factory=dict)  # vertex -> tuple of (orig vertex, coeff)
    content: dict = field(default_factory=dict)  # vertex -> tuple of (atom, count)
    provenance: dict = field(default_factory=dict)  # vertex -> original vertex
    splits: tuple = ()
    summands: tuple = ()  # (content, multiplicity) of removed isolated vertices

    @property
    def nweights(self) -> int:
        return len(self.sigmas)

    def sigma_vec(self, i: int) -> tuple:
        return tuple(self.sigmas[i][v] for v in self.quiver.vertices)

    def alpha(self, i: int) -> dict:
        return self.quiver.as_dict(alpha_from_sigma(self.quiver, self.sigma_vec(i)))

    def alphastar(self, i: int) -> dict:
        return self.quiver.as_dict(alphastar_from_sigma(self.quiver, self.sigma_vec(i)))

    def is_empty(self) -> bool:
        return not self.quiver.vertices

    def describe(self) -> str:
        Q = self.quiver
        verts = ", ".join(
            f"{v}:b={self.beta[v]},s=({','.join(str(s[v]) for s in self.sigmas)})" for v in Q.vertices
        )
        arrows = ", ".join(f"{a.id}:{a.tail}->{a.head}" for a in Q.arrows)
        return f"vertices [{verts}] arrows [{arrows}]"


def initial_state(Q: Quiver, beta: Sequence[int], alphas: Sequence[Sequence[int]],
                  m: Sequence[int] | None = None) -> SliceState:
    alphas = [tuple(a) for a in alphas]
    if not alphas:
        raise InvalidWeightError("at least one weight is required")
    m = tuple(m or (1,) * len(alphas))
    if len(m) != len(alphas):
        raise InvalidWeightError("exponent tuple length differs from the number of weights")
    beta = tuple(beta)
    if len(beta) != Q.n or any(b < 0 for b in beta):
        raise InvalidWeightError("beta must be a nonnegative vector with one entry per vertex")
    sigmas = []
    for a in alphas:
        s = sigma_from_alpha(Q, a)
        val = sum(x * y for x, y in zip(s, beta))
        if val != 0:
            raise InvalidWeightError(f"sigma(beta) = {val} for alpha {a}; must be 0")
        sigmas.append(Q.as_dict(s))
    return SliceState(
        quiver=Q,
        beta=Q.as_dict(beta),
        sigmas=tuple(sigmas),
        m=m,
        labels={v: ((v, 1),) for v in Q.vertices},
        content={v: ((v, 1),) for v in Q.vertices},
        provenance={v: v for v in Q.vertices},
    )


def _drop_vertex(state: SliceState, v) -> SliceState:
    Q = state.quiver.without_vertices([v])
    return replace(
        state,
        quiver=Q,
        beta={u: b for u, b in state.beta.items() if u != v},
        sigmas=tuple({u: x for u, x in s.items() if u != v} for s in state.sigmas),
        labels={u: x for u, x in state.labels.items() if u != v},
        content={u: x for u, x in state.content.items() if u != v},
        provenance={u: x for u, x in state.provenance.items() if u != v},
    )


# --- pruning and the simplification rules -----------------------------------

def _fresh_copy_ids(Q: Quiver, v, k: int) -> list:
    taken = set(map(str, Q.vertices))
    out, j = [], 1
    while len(out) < k:
        cand = f"{v}.{j}"
        if cand not in taken:
            out.append(cand)
        j += 1
    return out


def _split(state: SliceState, v, rule: str, values: list[list[int]], arrows: list[Arrow],
           alpha_zero: bool) -> SliceState:
    """Replace v by one copy per arrow; ``values[i][j]`` is sigma^i of copy j."""
    Q = state.quiver
    copies = _fresh_copy_ids(Q, v, len(arrows))
    retarget = {a.id: c for a, c in zip(arrows, copies)}
    new_arrows = []
    for a in Q.arrows:
        if a.id in retarget:
            if a.head == v:
                new_arrows.append(Arrow(a.id, a.tail, retarget[a.id]))
            else:
                new_arrows.append(Arrow(a.id, retarget[a.id], a.head))
        else:
            new_arrows.append(a)
    pos = Q.vertices.index(v)
    verts = Q.vertices[:pos] + tuple(copies) + Q.vertices[pos + 1:]
    beta = {u: b for u, b in state.beta.items() if u != v}
    labels = {u: x for u, x in state.labels.items() if u != v}
    content = {u: x for u, x in state.content.items() if u != v}
    prov = {u: x for u, x in state.provenance.items() if u != v}
    sigmas = [{u: x for u, x in s.items() if u != v} for s in state.sigmas]
    for j, c in enumerate(copies):
        beta[c] = state.beta[v]
        labels[c] = state.labels[v]
        content[c] = ((("copy", c), 1),)
        prov[c] = state.provenance[v]
        for i in range(state.nweights):
            sigmas[i][c] = values[i][j]
    record = SplitRecord(rule, v, state.content[v], tuple(("copy", c) for c in copies),
                         state.beta[v], alpha_zero)
    return replace(
        state,
        quiver=Quiver(verts, tuple(new_arrows)),
        beta=beta, sigmas=tuple(sigmas), labels=labels, content=content, provenance=prov,
        splits=state.splits + (record,),
    )


def _rule_a(state: SliceState, v) -> SliceState:
    Q = state.quiver
    alphas = [state.alpha(i) for i in range(state.nweights)]
    out_ids = {a.id for a in Q.out_arrows(v)}
    ins = Q.in_arrows(v)
    state = replace(state, quiver=Quiver(Q.vertices, tuple(a for a in Q.arrows if a.id not in out_ids)))
    if len(ins) >= 2:
        values = [[-alphas[i][a.tail] for a in ins] for i in range(state.nweights)]
        state = _split(state, v, "a", values, ins, True)
    return state


def _rule_b(state: SliceState, v) -> SliceState:
    Q = state.quiver
    astars = [state.alphastar(i) for i in range(state.nweights)]
    alpha_zero = all(state.alpha(i)[v] == 0 for i in range(state.nweights))
    in_ids = {a.id for a in Q.in_arrows(v)}
    outs = Q.out_arrows(v)
    state = replace(state, quiver=Quiver(Q.vertices, tuple(a for a in Q.arrows if a.id not in in_ids)))
    if len(outs) >= 2:
        values = [[astars[i][a.head] for a in outs] for i in range(state.nweights)]
        state = _split(state, v, "b'", values, outs, alpha_zero)
    return state


def prune_and_simplify(state: SliceState, trace: ReductionTrace | None = None) -> SliceState:
    """Apply zero-dimension removal, isolated-vertex removal and rules (a), (b') to a fixed point."""
    unit = FactorProduct.unit(state.nweights)

    def log(kind, target, detail):
        if trace is not None:
            trace.add(TraceStep(kind, str(target), unit, detail=detail, snapshot=state.describe()))

    while True:
        Q = state.quiver
        zero = [v for v in Q.vertices if state.beta[v] == 0]
        if zero:
            for v in zero:
                state = _drop_vertex(state, v)
                log("prune", v, "dimension 0")
            continue
        isolated = [v for v in Q.vertices if not Q.arrows_at(v)]
        if isolated:
            for v in isolated:
                if any(s[v] != 0 for s in state.sigmas):
                    raise VanishingError(
                        f"isolated vertex {v} of dimension {state.beta[v]} has nonzero weight; "
                        "the semi-invariant vanishes"
                    )
                state = replace(state, summands=state.summands + ((state.content[v], state.beta[v]),))
                state = _drop_vertex(state, v)
                log("prune", v, "isolated")
            continue
        fired = False
        alphas = [state.alpha(i) for i in range(state.nweights)]
        for v in Q.vertices:
            if all(a[v] == 0 for a in alphas) and (Q.out_arrows(v) or len(Q.in_arrows(v)) >= 2):
                state = _rule_a(state, v)
                log("simplify-a", v, "alpha = 0: outgoing arrows dropped, split per incoming arrow")
                fired = True
                break
        if fired:
            continue
        astars = [state.alphastar(i) for i in range(state.nweights)]
        for v in Q.vertices:
            if all(a[v] == 0 for a in astars) and (Q.in_arrows(v) or len(Q.out_arrows(v)) >= 2):
                state = _rule_b(state, v)
                log("simplify-b'", v, "alpha* = 0: incoming arrows dropped, split per outgoing arrow")
                fired = True
                break
        if not fired:
            return state


# --- eligibility ---------------------------------------------------------------

@dataclass(frozen=True)
class Eligibility:
    arrow: str
    ok: bool
    small: object = None  # the isolated endpoint ("vertex 1")
    large: object = None
    kind: str = ""  # "1-source" or "1-sink"
    reasons: tuple = ()


def arrow_eligibility(state: SliceState, a: Arrow) -> Eligibility:
    Q = state.quiver
    ends = {a.tail, a.head}
    if any(b.id != a.id and {b.tail, b.head} == ends for b in Q.arrows):
        return Eligibility(a.id, False, reasons=("parallel arrows between its endpoints",))
    cands = [u for u in (a.tail, a.head) if len(Q.arrows_at(u)) == 1]
    if not cands:
        return Eligibility(a.id, False, reasons=("not a 1-source or 1-sink",))
    cands.sort(key=lambda u: state.beta[u])
    alphas = [state.alpha(i) for i in range(state.nweights)]
    astars = [state.alphastar(i) for i in range(state.nweights)]
    reasons = []
    first = None
    for u in cands:
        w = a.head if u == a.tail else a.tail
        kind = "1-source" if u == a.tail else "1-sink"
        first = first or (u, w, kind)
        if state.beta[u] > state.beta[w]:
            reasons.append(f"{kind} at {u}: dimension {state.beta[u]} exceeds {state.beta[w]} at {w}")
            continue
        active = [i for i in range(state.nweights) if state.sigmas[i][u] != 0]
        if not active:
            reasons.append(f"{kind} at {u}: no weight depends on the arrow")
            continue
        bad = []
        # (c) is checked for every weight: all of them are transported by the slice
        for i in range(state.nweights):
            al, ast = alphas[i], astars[i]
            if kind == "1-source":
                if not (al[u] == al[w] or ast[u] == 0):
                    bad.append(f"weight {i + 1}: alpha_1={al[u]} != alpha_2={al[w]} and alpha*_1={ast[u]} != 0")
            else:
                if not (al[u] == 0 or ast[u] == ast[w]):
                    bad.append(f"weight {i + 1}: alpha_1={al[u]} != 0 and alpha*_1={ast[u]} != alpha*_2={ast[w]}")
        if bad:
            reasons.append(f"{kind} at {u}: " + "; ".join(bad))
            continue
        return Eligibility(a.id, True, u, w, kind)
    u, w, kind = first
    return Eligibility(a.id, False, u, w, kind, tuple(reasons))


def eligible_arrows(state: SliceState) -> list[Eligibility]:
    out = [arrow_eligibility(state, a) for a in state.quiver.arrows]
    return sorted((e for e in out if e.ok), key=lambda e: arrow_sort_key(e.arrow))


# --- symbolic labels -------------------------------------------------------------

def _label_sub(x: tuple, y: tuple) -> tuple:
    c = Counter(dict(x))
    c.subtract(dict(y))
    return tuple(sorted(((k, v) for k, v in c.items() if v), key=lambda kv: str(kv[0])))


def _simplify_label(label: tuple, relations: Sequence[dict]) -> tuple:
    """Pick the shortest representative of label modulo sigma^i(beta) = 0."""
    if not relations:
        return label
    best, best_key = label, None
    ranges = [range(-2, 3)] * len(relations)
    for ks in sorted(iproduct(*ranges), key=lambda t: sum(map(abs, t))):
        c = Counter(dict(label))
        for k, rel in zip(ks, relations):
            for v, x in rel.items():
                c[v] += k * x
        items = {v: x for v, x in c.items() if x}
        key = (len(items), sum(map(abs, items.values())), sum(1 for x in items.values() if x < 0))
        if best_key is None or key < best_key:
            best_key = key
            best = tuple(sorted(items.items(), key=lambda kv: str(kv[0])))
    return best


def label_text(label: tuple, order: Sequence | None = None) -> str:
    if not label:
        return "0"
    pos = {v: i for i, v in enumerate(order or [])}
    items = sorted(label, key=lambda kv: (kv[1] < 0, pos.get(kv[0], len(pos)), str(kv[0])))
    out = ""
    for v, c in items:
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        out += f"{sign}{mag}b{v}"
    return out.lstrip("+")


def symbolic_bracket(d: Sequence[int], lo: str, hi: str) -> str:
    if len(d) == 1:
        sup = "" if d[0] == 1 else f"^{{{d[0]}}}"
    else:
        sup = "^{" + ",".join(map(str, d)) + "}"
    sub = f"{{{hi}}}" if lo == hi else f"{{{lo},{hi}}}"
    return f"[s]{sup}_{sub}"


# --- one slice -------------------------------------------------------------------

def slice_step(state: SliceState, arrow_id: str, relations: Sequence[dict] = (),
               label_order: Sequence | None = None) -> tuple[SliceState, FactorProduct, str]:
    """Slice at an eligible arrow; returns the new state, its factor and the symbolic factor."""
    Q = state.quiver
    a = Q.arrow(arrow_id)
    el = arrow_eligibility(state, a)
    if not el.ok:
        raise ValueError(f"arrow {arrow_id} is not eligible: " + "; ".join(el.reasons))
    u, w = el.small, el.large
    d = tuple(abs(s[u]) for s in state.sigmas)
    factor = bracket(d, state.m, state.beta[u], state.beta[w])
    new_arrows = [b for b in Q.arrows if b.id != a.id]
    used = {b.id for b in Q.arrows}

    def fresh(base: str) -> str:
        name = base + "'"
        while name in used:
            name += "'"
        used.add(name)
        return name

    for b in Q.arrows:
        if b.id == a.id:
            continue
        if b.tail == w:
            new_arrows.append(Arrow(fresh(b.id), u, b.head))
        elif b.head == w:
            new_arrows.append(Arrow(fresh(b.id), b.tail, u))
    beta = dict(state.beta)
    beta[w] = state.beta[w] - state.beta[u]
    sigmas = []
    for s in state.sigmas:
        s2 = dict(s)
        s2[u] = s[u] + s[w]
        sigmas.append(s2)
    labels = dict(state.labels)
    labels[w] = _simplify_label(_label_sub(state.labels[w], state.labels[u]), relations)
    content = dict(state.content)
    merged = Counter(dict(state.content[u]))
    merged.update(dict(state.content[w]))
    content[u] = tuple(sorted(merged.items(), key=lambda kv: str(kv[0])))
    new = replace(state, quiver=Quiver(Q.vertices, tuple(new_arrows)), beta=beta,
                  sigmas=tuple(sigmas), labels=labels, content=content)
    _check_alpha_transport(state, new, u, w, el.kind)
    sym = symbolic_bracket(d, label_text(state.labels[u], label_order),
                           label_text(state.labels[w], label_order))
    return new, factor, sym


def _path_counts(Q: Quiver, start) -> dict:
    counts = {v: 0 for v in Q.vertices}
    counts[start] = 1
    for v in Q.topological_order():
        if counts[v]:
            for a in Q.out_arrows(v):
                counts[a.head] += counts[v]
    return counts


def _check_alpha_transport(old: SliceState, new: SliceState, u, w, kind: str) -> None:
    """alpha_a = alpha + (alpha_2 - alpha_1) P_1 - alpha_1 S_2 (1-source) or alpha + alpha_1 (P_1 - S_1) (1-sink)."""
    P = _path_counts(new.quiver, u)
    for i in range(old.nweights):
        a_old, a_new = old.alpha(i), new.alpha(i)
        a1, a2 = a_old[u], a_old[w]
        for v in new.quiver.vertices:
            if kind == "1-source":
                expect = a_old[v] + (a2 - a1) * P[v] - (a1 if v == w else 0)
            else:
                expect = a_old[v] + a1 * P[v] - (a1 if v == u else 0)
            if a_new[v] != expect:
                raise InvariantViolation(
                    f"alpha transport mismatch at {v} for weight {i + 1}: {a_new[v]} vs {expect}"
                )


# --- driver --------------------------------------------------------------------

@dataclass(frozen=True)
class NotSliceable:
    diagnostic: str
    per_arrow: tuple
    trace: ReductionTrace
    state: SliceState

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class SliceResult:
    product: FactorProduct
    trace: ReductionTrace
    state: SliceState  # terminal state, which keeps the split and summand records


def _diagnose(state: SliceState) -> tuple[str, tuple]:
    rows = [arrow_eligibility(state, a) for a in state.quiver.arrows]
    kinds = {e.kind for e in rows if e.small is not None}
    per_arrow = tuple(f"{e.arrow}: " + "; ".join(e.reasons) for e in rows)
    parts = []
    if "1-sink" not in kinds:
        parts.append("no 1-sink")
    else:
        parts.append("no 1-sink with alpha_1 = 0 or alpha*_1 = alpha*_2")
    if "1-source" not in kinds:
        parts.append("no 1-source")
    else:
        parts.append("no 1-source with alpha_1 = alpha_2 or alpha*_1 = 0")
    return "; ".join(parts), per_arrow


def _near(v, focus) -> bool:
    return v == focus or str(v).startswith(f"{focus}.")


def run_slice(Q: Quiver, beta: Sequence[int], alphas: Sequence[Sequence[int]],
              m: Sequence[int] | None = None,
              choose: Callable[[list[str]], str] | None = None) -> SliceResult | NotSliceable:
    """Slice until the quiver is empty.

    ``choose`` picks among eligible arrow ids.  By default the next arrow is the
    smallest eligible one touching the vertex reduced by the previous slice (or
    a split copy of it), else the smallest eligible arrow overall.
    """
    state = initial_state(Q, beta, alphas, m)
    relations = [dict(s) for s in state.sigmas]
    trace = ReductionTrace("slice", state.nweights)
    order = list(Q.vertices)
    focus = None
    while True:
        state = prune_and_simplify(state, trace)
        if state.is_empty():
            return SliceResult(trace.product(), trace, state)
        elig = eligible_arrows(state)
        if not elig:
            diag, per_arrow = _diagnose(state)
            return NotSliceable(diag, per_arrow, trace, state)
        eligible = [e.arrow for e in elig]
        if choose:
            aid = choose(eligible)
        else:
            arrows = {a.id: a for a in state.quiver.arrows}
            near = [e for e in eligible
                    if focus is not None and (_near(arrows[e].tail, focus) or _near(arrows[e].head, focus))]
            aid = (near or eligible)[0]
        focus = next(e.large for e in elig if e.arrow == aid)
        state, factor, sym = slice_step(state, aid, relations, order)
        trace.add(TraceStep("slice", aid, factor, sym, snapshot=state.describe()))


# --- locally semi-simple reconstruction ------------------------------------------

@dataclass(frozen=True)
class Unsupported:
    reason: str

    def __bool__(self) -> bool:
        return False


def locally_semisimple(result: SliceResult, Q: Quiver) -> list[tuple[tuple, int]] | Unsupported:
    """Summands of the locally semi-simple representative on the original quiver."""
    summands = [(Counter(dict(c)), k) for c, k in result.state.summands]
    for rec in reversed(result.state.splits):
        if rec.rule == "b'" and not rec.alpha_zero:
            return Unsupported(f"rule (b') split at vertex {rec.vertex} with nonzero alpha")
        touched = []
        for atom in rec.atoms:
            hits = [j for j, (c, _) in enumerate(summands) if c.get(atom)]
            if len(hits) != 1:
                return Unsupported(f"copy {atom[1]} meets {len(hits)} summands")
            j = hits[0]
            c, k = summands[j]
            if c[atom] != 1 or k != rec.dim or j in touched:
                return Unsupported(f"copy {atom[1]} cannot be glued back")
            touched.append(j)
        merged = Counter(dict(rec.parent_content))
        for j, atom in zip(touched, rec.atoms):
            c = Counter(summands[j][0])
            del c[atom]
            merged.update(c)
        summands = [s for j, s in enumerate(summands) if j not in touched] + [(merged, rec.dim)]
    out: Counter = Counter()
    for c, k in summands:
        if any(not (a in Q._index) for a in c):
            return Unsupported("unresolved split copy in the result")
        out[Q.vec(c)] += k
    return sorted(out.items(), key=lambda rk: (sum(rk[0]), rk[0]))
