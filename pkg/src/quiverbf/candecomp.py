"""Canonical decompositions for Dynkin quivers.

``generic_decomposition`` is the numeric ground truth: multiplicities of the
indecomposable summands of a random representation, read off from Hom
dimensions.  ``dn_canonical`` is the combinatorial diagram rule for D_n built
on top of the type A decomposition, and it is cross-checked against the
numeric route.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import flint

from .quiver import Arrow, Quiver, classify, euler_form, generic_hom_ext, positive_roots
from .schofield import hom_dimension, random_exceptional, random_representation

Vec = tuple


class DecompositionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Decomposition:
    quiver: Quiver
    beta: Vec
    summands: tuple  # ((root, multiplicity), ...) in display order

    def total(self) -> Vec:
        out = [0] * len(self.beta)
        for r, k in self.summands:
            for i, x in enumerate(r):
                out[i] += k * x
        return tuple(out)

    def as_dict(self) -> dict:
        out: dict = {}
        for r, k in self.summands:
            out[r] = out.get(r, 0) + k
        return out

    def same_as(self, other: "Decomposition") -> bool:
        return self.as_dict() == other.as_dict()

    def text(self) -> str:
        parts = []
        for r, k in self.summands:
            body = "(" + ",".join(map(str, r)) + ")"
            parts.append(body + (f"^{k}" if k > 1 else ""))
        lhs = "(" + ",".join(map(str, self.beta)) + ")"
        return f"{lhs} = " + " + ".join(parts) if parts else f"{lhs} = 0"

    def to_json(self) -> dict:
        return {
            "beta": list(self.beta),
            "summands": [{"root": list(r), "multiplicity": k} for r, k in self.summands],
        }


# --- numeric route -------------------------------------------------------------

@lru_cache(maxsize=None)
def _exceptional(Q: Quiver, root: Vec, seed: int):
    return random_exceptional(Q, root, seed=seed)


@lru_cache(maxsize=None)
def _hom_matrix(Q: Quiver, roots: tuple, seed: int) -> tuple:
    reps = [_exceptional(Q, r, seed) for r in roots]
    return tuple(tuple(hom_dimension(Q, V, W) for W in reps) for V in reps)


def _solve_multiplicities(Q: Quiver, beta: Vec, roots: tuple, seed: int) -> dict:
    M = random_representation(Q, beta, seed)
    H = _hom_matrix(Q, roots, seed)
    h = [hom_dimension(Q, _exceptional(Q, r, seed), M) for r in roots]
    n = len(roots)
    sol = flint.fmpq_mat(n, n, [x for row in H for x in row]).solve(flint.fmpq_mat(n, 1, h))
    mult = {}
    for r, k in zip(roots, (sol[i, 0] for i in range(n))):
        if k.q != 1 or k < 0:
            raise DecompositionError(f"non-integral or negative multiplicity {k} for {r}")
        if k:
            mult[r] = int(k.p)
    return mult


def generic_decomposition(Q: Quiver, beta: Sequence[int], seed: int = 42) -> Decomposition:
    """Canonical decomposition of beta for a connected Dynkin quiver Q.

    h_i = dim Hom(V_i, M) for the exceptional V_i of every positive root, and
    h = H * mult with H_ij = dim Hom(V_i, V_j).  A second seed must agree.
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) != Q.n or any(b < 0 for b in beta):
        raise ValueError("beta must be nonnegative with one entry per vertex")
    if not any(beta):
        return Decomposition(Q, beta, ())
    roots = tuple(r for r in positive_roots(Q) if all(x <= b for x, b in zip(r, beta)))
    runs = []
    for s in (seed, seed + 1):
        for attempt in range(3):
            try:
                runs.append(_solve_multiplicities(Q, beta, roots, s + 1000 * attempt))
                break
            except DecompositionError:
                continue
        else:
            raise DecompositionError(f"no generic sample for seed {s}")
    if runs[0] != runs[1]:
        raise DecompositionError(f"seeds disagree: {runs[0]} vs {runs[1]}")
    summands = tuple(sorted(runs[0].items(), key=lambda kv: (sum(kv[0]), kv[0])))
    dec = Decomposition(Q, beta, summands)
    if dec.total() != beta:
        raise DecompositionError(f"summands add up to {dec.total()}, not {beta}")
    return dec


def ext_vanishes(dec: Decomposition, seed: int = 42) -> bool:
    """Generic Ext between all pairs of summand roots is zero."""
    roots = [r for r, _ in dec.summands]
    return all(generic_hom_ext(dec.quiver, a, b, seed)[1] == 0 for a in roots for b in roots)


# --- type A ------------------------------------------------------------------

def _is_type_a(Q: Quiver) -> bool:
    cls = classify(Q)
    return not isinstance(cls, list) and cls.kind == "Dynkin" and cls.subtype.startswith("A")


def hom_order(Q: Quiver, roots: Sequence[Vec], seed: int = 42) -> list:
    """Distinct roots ordered so that every nonzero Hom X -> Y has Y listed before X."""
    roots = list(dict.fromkeys(roots))
    maps_to = {r: {t for t in roots if t != r and generic_hom_ext(Q, r, t, seed)[0]} for r in roots}
    out: list = []
    pending = sorted(roots, key=lambda r: (sum(r), r))
    while pending:
        ready = [r for r in pending if maps_to[r] <= set(out)]
        if not ready:
            raise DecompositionError("Hom relation among summands has a cycle")
        out.append(ready[0])
        pending.remove(ready[0])
    return out


def an_decomposition(Q: Quiver, beta: Sequence[int], seed: int = 42) -> Decomposition:
    if not _is_type_a(Q):
        raise ValueError(f"an_decomposition needs a type A quiver, got {classify(Q)}")
    dec = generic_decomposition(Q, beta, seed)
    mult = dec.as_dict()
    order = hom_order(Q, list(mult), seed)
    return Decomposition(Q, dec.beta, tuple((r, mult[r]) for r in order))


def interval(root: Sequence[int]) -> tuple[int, int] | None:
    """[i, j] (1-based) for a 0/1 vector supported on a contiguous range."""
    idx = [i + 1 for i, x in enumerate(root) if x]
    if not idx or any(root[i - 1] != 1 for i in idx) or idx[-1] - idx[0] + 1 != len(idx):
        return None
    return idx[0], idx[-1]


# --- D_n diagram ---------------------------------------------------------------

@dataclass
class DiagramRow:
    pieces: list  # A_{n-1} roots stacked in this row
    circle: bool = False
    role: str = ""  # "second", "slot", "first", "zero"

    def total(self, width: int) -> Vec:
        out = [0] * width
        for p in self.pieces:
            for i, x in enumerate(p):
                out[i] += x
        return tuple(out)


@dataclass
class DnDiagram:
    width: int  # n - 1
    rows: list = field(default_factory=list)
    top_line: int = 0  # lines are drawn before rows[top_line] and before rows[bottom_line]
    bottom_line: int = 0
    arrows: tuple = ()  # orientation of the A_{n-1} chain, True when i -> i+1
    stop_reason: str = ""

    def column_sums(self) -> Vec:
        out = [0] * self.width
        for row in self.rows:
            for i, x in enumerate(row.total(self.width)):
                out[i] += x
        return tuple(out)

    def circles(self) -> int:
        return sum(r.circle for r in self.rows)

    def render(self) -> str:
        cellw = max(2, max((max(r.total(self.width), default=0) for r in self.rows), default=1) + 1)
        header = "    " + "".join(f"{i + 1:^{cellw}}" + (" " if i < self.width - 1 else "")
                                    for i in range(self.width))
        rule = "  " + "-" * (len(header) + 2)
        lines = [header]
        for k, row in enumerate(self.rows):
            if k in (self.top_line, self.bottom_line) and self.top_line != self.bottom_line:
                lines.append(rule)
            tot = row.total(self.width)
            cells = []
            for i in range(self.width):
                cells.append(f"{'•' * tot[i]:^{cellw}}")
                if i < self.width - 1:
                    linked = any(p[i] and p[i + 1] for p in row.pieces)
                    cells.append(("→" if self.arrows[i] else "←") if linked else " ")
            mark = "∘" if row.circle else " "
            label = " + ".join(_interval_text(p) for p in row.pieces) or "-"
            lines.append(f"  {mark} " + "".join(cells) + f"   {label}")
        if self.rows and self.bottom_line >= len(self.rows) and self.top_line != self.bottom_line:
            lines.append(rule)
        if self.stop_reason:
            lines.append(f"  stopped: {self.stop_reason}")
        return "\n".join(lines)


def _interval_text(root) -> str:
    iv = interval(root)
    return f"[{iv[0]},{iv[1]}]" if iv else "(" + ",".join(map(str, root)) + ")"


@dataclass(frozen=True)
class DnLabels:
    """Vertex ids in the standard D_n labelling: 1 - 2 - 3 - ... - (n-1) with n attached to 2."""
    order: tuple  # order[k] is the vertex playing label k + 1

    @property
    def n(self) -> int:
        return len(self.order)


def dn_labels(Q: Quiver) -> DnLabels:
    cls = classify(Q)
    if isinstance(cls, list) or cls.kind != "Dynkin" or not cls.subtype.startswith("D"):
        raise ValueError(f"dn_canonical needs a D_n quiver, got {cls}")
    adj = {v: set() for v in Q.vertices}
    for a in Q.arrows:
        adj[a.tail].add(a.head)
        adj[a.head].add(a.tail)
    center = next(v for v in Q.vertices if len(adj[v]) == 3)
    leaves = [u for u in adj[center] if len(adj[u]) == 1]

    def arm(start):
        path, prev, cur = [start], center, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                return path
            prev, cur = cur, nxt[0]
            path.append(cur)

    if len(leaves) == 3:
        # D4: keep the declared order when it already fits the labelling
        if Q.n == 4 and Q.vertices[1] == center:
            one, last = Q.vertices[0], Q.vertices[3]
            chain = [Q.vertices[2]]
        else:
            one, chain_start, last = sorted(leaves, key=Q.index)
            chain = [chain_start]
    else:
        long_start = next(u for u in adj[center] if len(adj[u]) != 1)
        chain = arm(long_start)
        one, last = sorted(leaves, key=Q.index)
        # prefer the declared vertex n in that role
        if Q.vertices[-1] == one:
            one, last = last, one
    return DnLabels((one, center, *chain, last))


def _relabelled(Q: Quiver, lab: DnLabels) -> Quiver:
    pos = {v: k + 1 for k, v in enumerate(lab.order)}
    return Quiver(tuple(range(1, lab.n + 1)), tuple(Arrow(a.id, pos[a.tail], pos[a.head]) for a in Q.arrows))


@dataclass(frozen=True)
class DnResult:
    decomposition: Decomposition
    diagram: DnDiagram
    labels: DnLabels
    opposite: bool


def dn_canonical(Q: Quiver, beta: Sequence[int], seed: int = 42, cross_check: bool = True) -> DnResult:
    """Diagram rule for the canonical decomposition of a D_n quiver."""
    beta = tuple(int(b) for b in beta)
    lab = dn_labels(Q)
    n = lab.n
    P = _relabelled(Q, lab)
    b = tuple(beta[Q.index(v)] for v in lab.order)
    opposite = any(a.tail == n and a.head == 2 for a in P.arrows)
    if opposite:
        P = P.opposite()
    A = P.without_vertices([n])
    arrows_lr = tuple(any(a.tail == i and a.head == i + 1 for a in A.arrows) for i in range(1, n - 1))
    an = an_decomposition(A, b[:-1], seed) if any(b[:-1]) else Decomposition(A, b[:-1], ())
    rows = [r for r, k in an.summands for _ in range(k)]

    zero = [r for r in rows if r[1] == 0]
    rest = [r for r in rows if r[1] != 0]
    first_dim1 = 1 if arrows_lr[0] else 0  # 1 -> 2: rows through vertex 1 lie under the line
    first = [r for r in rest if r[0] == first_dim1]
    second = [r for r in rest if r[0] != first_dim1]
    for f in set(first):
        for w in set(second):
            if generic_hom_ext(A, f, w, seed)[0]:
                raise DecompositionError(f"first-class {f} maps to second-class {w}")

    k = b[-1]
    slots = [[f] for f in first[:k]] + [[] for _ in range(max(0, k - len(first)))]
    leftover_first = first[k:]
    moved = 0
    reason = "no circles" if k == 0 else ""
    while k and not reason:
        if moved == len(second):
            reason = "(b) second class exhausted"
            break
        if moved == k:
            reason = "(a) reached the top line"
            break
        w = second[moved]
        target = slots[k - 1 - moved]
        if target and generic_hom_ext(A, w, target[0], seed)[0]:
            reason = f"(c) Hom({_interval_text(w)}, {_interval_text(target[0])}) != 0"
            break
        target.append(w)
        moved += 1

    diagram = DnDiagram(n - 1, arrows=arrows_lr, stop_reason=reason)
    for w in second[moved:]:
        diagram.rows.append(DiagramRow([w], role="second"))
    diagram.top_line = len(diagram.rows)
    for s in slots:
        diagram.rows.append(DiagramRow(list(s), circle=True, role="slot"))
    diagram.bottom_line = len(diagram.rows)
    for f in leftover_first:
        diagram.rows.append(DiagramRow([f], role="first"))
    for z in zero:
        diagram.rows.append(DiagramRow([z], role="zero"))

    counts: dict = {}
    for row in diagram.rows:
        root = row.total(n - 1) + (int(row.circle),)
        counts[root] = counts.get(root, 0) + 1
    unlabel = {k + 1: v for k, v in enumerate(lab.order)}

    def back(root):
        vals = {unlabel[i + 1]: x for i, x in enumerate(root)}
        return tuple(vals[v] for v in Q.vertices)

    summands = tuple((back(r), m) for r, m in counts.items())
    dec = Decomposition(Q, beta, summands)
    if dec.total() != beta:
        raise DecompositionError(f"diagram adds up to {dec.total()}, not {beta}")
    if cross_check:
        ref = generic_decomposition(Q, beta, seed)
        if not dec.same_as(ref):
            raise DecompositionError(f"diagram rule gives {dec.text()} but the numeric route gives {ref.text()}")
    return DnResult(dec, diagram, lab, opposite)
