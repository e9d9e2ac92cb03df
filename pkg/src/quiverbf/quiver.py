"""Quivers, the Euler form, weight conversions, reflections and root systems.

Dimension vectors and weights are plain integer tuples aligned with
``Quiver.vertices``.  Engines that mutate the quiver work with dicts keyed
by vertex id and convert at the boundary with :meth:`Quiver.vec` and
:meth:`Quiver.as_dict`.
"""
from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

Vertex = Hashable
Vec = tuple[int, ...]


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: Vertex
    head: Vertex


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple[Arrow, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    @classmethod
    def from_edges(cls, vertices: Iterable[Vertex], edges: Iterable[tuple]) -> "Quiver":
        """Build from ``(tail, head)`` pairs or ``(id, tail, head)`` triples."""
        arrows = []
        for k, e in enumerate(edges, start=1):
            if len(e) == 2:
                arrows.append(Arrow(f"a{k}", e[0], e[1]))
            else:
                arrows.append(Arrow(str(e[0]), e[1], e[2]))
        return cls(tuple(vertices), tuple(arrows))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: Vertex) -> int:
        return self._index[v]

    def vec(self, values: Mapping[Vertex, int]) -> Vec:
        return tuple(int(values.get(v, 0)) for v in self.vertices)

    def as_dict(self, vec: Sequence[int]) -> dict:
        if len(vec) != self.n:
            raise ValueError(f"vector of length {len(vec)} for a quiver with {self.n} vertices")
        return dict(zip(self.vertices, vec))

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise KeyError(arrow_id)

    def out_arrows(self, v: Vertex) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == v]

    def in_arrows(self, v: Vertex) -> list[Arrow]:
        return [a for a in self.arrows if a.head == v]

    def arrows_at(self, v: Vertex) -> list[Arrow]:
        return [a for a in self.arrows if v in (a.tail, a.head)]

    def is_sink(self, v: Vertex) -> bool:
        return not self.out_arrows(v)

    def is_source(self, v: Vertex) -> bool:
        return not self.in_arrows(v)

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.id, a.head, a.tail) for a in self.arrows))

    def without_vertices(self, drop: Iterable[Vertex]) -> "Quiver":
        drop = set(drop)
        return Quiver(
            tuple(v for v in self.vertices if v not in drop),
            tuple(a for a in self.arrows if a.tail not in drop and a.head not in drop),
        )

    def topological_order(self) -> list:
        order = validate_quiver(self)
        if not isinstance(order, list):
            raise ValueError("; ".join(order.violations))
        return order


@dataclass(frozen=True)
class Violations:
    violations: tuple[str, ...]

    def __bool__(self) -> bool:
        return False


def validate_quiver(Q: Quiver) -> list | Violations:
    """Return a topological order of the vertices, or the list of violations."""
    problems = []
    for label, ids in (("vertex", Q.vertices), ("arrow", [a.id for a in Q.arrows])):
        for item, count in Counter(ids).items():
            if count > 1:
                problems.append(f"duplicate {label} id {item}")
    known = set(Q.vertices)
    for a in Q.arrows:
        for end in (a.tail, a.head):
            if end not in known:
                problems.append(f"arrow {a.id} uses unknown vertex {end}")
        if a.tail == a.head:
            problems.append(f"loop at {a.tail} (arrow {a.id})")
    if problems:
        return Violations(tuple(problems))

    indeg = {v: 0 for v in Q.vertices}
    for a in Q.arrows:
        indeg[a.head] += 1
    queue = deque(v for v in Q.vertices if indeg[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for a in Q.out_arrows(v):
            indeg[a.head] -= 1
            if indeg[a.head] == 0:
                queue.append(a.head)
    if len(order) < Q.n:
        cyclic = sorted((v for v in Q.vertices if indeg[v] > 0), key=str)
        inside = [a.id for a in Q.arrows if indeg[a.tail] > 0 and indeg[a.head] > 0]
        return Violations((f"oriented cycle among {{{', '.join(map(str, cyclic))}}} "
                           f"(arrows {', '.join(inside)})",))
    return order


def euler_matrix(Q: Quiver) -> list[list[int]]:
    E = [[int(i == j) for j in range(Q.n)] for i in range(Q.n)]
    for a in Q.arrows:
        E[Q.index(a.tail)][Q.index(a.head)] -= 1
    return E


def euler_form(Q: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    if len(alpha) != Q.n or len(beta) != Q.n:
        raise ValueError("vector length does not match the number of vertices")
    total = sum(x * y for x, y in zip(alpha, beta))
    for a in Q.arrows:
        total -= alpha[Q.index(a.tail)] * beta[Q.index(a.head)]
    return total


@dataclass(frozen=True)
class WeightForms:
    alpha: Vec
    sigma: Vec
    alphastar: Vec


def sigma_from_alpha(Q: Quiver, alpha: Sequence[int]) -> Vec:
    s = list(alpha)
    for a in Q.arrows:
        s[Q.index(a.head)] -= alpha[Q.index(a.tail)]
    return tuple(s)


def sigma_from_alphastar(Q: Quiver, astar: Sequence[int]) -> Vec:
    s = [-x for x in astar]
    for a in Q.arrows:
        s[Q.index(a.tail)] += astar[Q.index(a.head)]
    return tuple(s)


def alpha_from_sigma(Q: Quiver, sigma: Sequence[int]) -> Vec:
    alpha = [0] * Q.n
    for v in Q.topological_order():
        i = Q.index(v)
        alpha[i] = sigma[i] + sum(alpha[Q.index(a.tail)] for a in Q.in_arrows(v))
    return tuple(alpha)


def alphastar_from_sigma(Q: Quiver, sigma: Sequence[int]) -> Vec:
    astar = [0] * Q.n
    for v in reversed(Q.topological_order()):
        i = Q.index(v)
        astar[i] = -sigma[i] + sum(astar[Q.index(a.head)] for a in Q.out_arrows(v))
    return tuple(astar)


def convert_weight(Q: Quiver, *, alpha=None, sigma=None, alphastar=None) -> WeightForms:
    """Given exactly one of alpha, sigma, alpha*, return all three."""
    given = [x is not None for x in (alpha, sigma, alphastar)]
    if sum(given) != 1:
        raise ValueError("pass exactly one of alpha, sigma, alphastar")
    if alpha is not None:
        sigma = sigma_from_alpha(Q, alpha)
    elif alphastar is not None:
        sigma = sigma_from_alphastar(Q, alphastar)
    sigma = tuple(sigma)
    if len(sigma) != Q.n:
        raise ValueError("vector length does not match the number of vertices")
    return WeightForms(alpha_from_sigma(Q, sigma), sigma, alphastar_from_sigma(Q, sigma))


def reflect_vector(Q: Quiver, x: Vertex, vec: Sequence[int]) -> Vec:
    i = Q.index(x)
    out = list(vec)
    out[i] = -vec[i]
    for a in Q.arrows_at(x):
        other = a.head if a.tail == x else a.tail
        out[i] += vec[Q.index(other)]
    return tuple(out)


def reflect_quiver(Q: Quiver, x: Vertex) -> Quiver:
    return Quiver(
        Q.vertices,
        tuple(Arrow(a.id, a.head, a.tail) if x in (a.tail, a.head) else a for a in Q.arrows),
    )


def reflect(Q: Quiver, x: Vertex, beta: Sequence[int], weights: Sequence[Sequence[int]] = ()):
    """Apply c_x at a sink or source: returns (c_x Q, c_x beta, [c_x alpha^i])."""
    if not (Q.is_sink(x) or Q.is_source(x)):
        raise ValueError(f"vertex {x} is neither a sink nor a source")
    return (
        reflect_quiver(Q, x),
        reflect_vector(Q, x, beta),
        [reflect_vector(Q, x, w) for w in weights],
    )


def admissible_sink_order(Q: Quiver) -> list:
    """Vertices ordered so that each is a sink after reflecting its predecessors."""
    return list(reversed(Q.topological_order()))


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _unitriangular_inverse(Q: Quiver, E):
    # E is unitriangular under a topological order, so back substitution stays integral.
    n = Q.n
    order = [Q.index(v) for v in Q.topological_order()]
    inv = [[0] * n for _ in range(n)]
    for col in range(n):
        x = [0] * n
        for i in reversed(order):
            rhs = int(i == col) - sum(E[i][j] * x[j] for j in range(n) if j != i)
            x[i] = rhs  # diagonal entries are 1
        for i in range(n):
            inv[i][col] = x[i]
    return inv


def coxeter_matrix(Q: Quiver) -> list[list[int]]:
    """c = -E^{-1} E^t, acting on column vectors."""
    E = euler_matrix(Q)
    Et = [list(r) for r in zip(*E)]
    M = _matmul(_unitriangular_inverse(Q, E), Et)
    return [[-x for x in row] for row in M]


def coxeter_by_reflections(Q: Quiver, order: Sequence[Vertex] | None = None) -> list[list[int]]:
    """Compose single reflections along an admissible sink ordering."""
    order = list(order) if order is not None else admissible_sink_order(Q)
    cols = []
    for j in range(Q.n):
        e = tuple(int(i == j) for i in range(Q.n))
        cur_q, v = Q, e
        for x in order:
            if not cur_q.is_sink(x):
                raise ValueError(f"ordering is not admissible at {x}")
            v = reflect_vector(cur_q, x, v)
            cur_q = reflect_quiver(cur_q, x)
        cols.append(v)
    return [[cols[j][i] for j in range(Q.n)] for i in range(Q.n)]


def apply_matrix(M, v: Sequence[int]) -> Vec:
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M)))


# --- classification -------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    kind: str  # "Dynkin", "Euclidean" or "other"
    subtype: str  # e.g. "D4", "~A1", ""

    def __str__(self) -> str:
        return f"{self.kind} {self.subtype}".strip()


def components(Q: Quiver) -> list[list]:
    seen, comps = set(), []
    for v in Q.vertices:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for a in Q.arrows_at(u):
                w = a.head if a.tail == u else a.tail
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp, key=Q.index))
    return comps


def _arm_lengths(adj, center):
    arms = []
    for start in adj[center]:
        length, prev, cur = 1, center, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if len(nxt) != 1:
                if len(nxt) > 1:
                    return None
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return sorted(arms)


def classify(Q: Quiver) -> Classification | list[Classification]:
    """Classify the underlying graph; disconnected quivers give one result per component."""
    comps = components(Q)
    if len(comps) > 1:
        return [classify(Q.without_vertices(set(Q.vertices) - set(c))) for c in comps]
    n = Q.n
    edges = Counter(frozenset((a.tail, a.head)) for a in Q.arrows)
    if any(k > 2 for k in edges.values()):
        return Classification("other", "")
    if any(k == 2 for k in edges.values()):
        if n == 2 and len(Q.arrows) == 2:
            return Classification("Euclidean", "~A1")
        return Classification("other", "")
    adj = {v: [] for v in Q.vertices}
    for e in edges:
        u, w = tuple(e)
        adj[u].append(w)
        adj[w].append(u)
    m = len(edges)
    degrees = {v: len(adj[v]) for v in Q.vertices}
    if m == n:
        if all(d == 2 for d in degrees.values()):
            return Classification("Euclidean", f"~A{n - 1}")
        return Classification("other", "")
    if m != n - 1:
        return Classification("other", "")
    branch = [v for v in Q.vertices if degrees[v] >= 3]
    if not branch:
        return Classification("Dynkin", f"A{n}")
    if len(branch) == 1:
        v = branch[0]
        arms = _arm_lengths(adj, v)
        if degrees[v] == 4:
            return Classification("Euclidean", "~D4") if arms == [1, 1, 1, 1] else Classification("other", "")
        if degrees[v] > 4 or arms is None:
            return Classification("other", "")
        if arms[0] == 1 and arms[1] == 1:
            return Classification("Dynkin", f"D{n}")
        table = {(1, 2, 2): ("Dynkin", "E6"), (1, 2, 3): ("Dynkin", "E7"), (1, 2, 4): ("Dynkin", "E8"),
                 (2, 2, 2): ("Euclidean", "~E6"), (1, 3, 3): ("Euclidean", "~E7"),
                 (1, 2, 5): ("Euclidean", "~E8")}
        kind, sub = table.get(tuple(arms), ("other", ""))
        return Classification(kind, sub)
    if len(branch) == 2 and all(degrees[v] == 3 for v in branch):
        leaves = [w for v in branch for w in adj[v] if degrees[w] == 1]
        if len(leaves) == 4:
            return Classification("Euclidean", f"~D{n - 1}")
    return Classification("other", "")


def coxeter_number(c: Classification) -> int:
    t, r = c.subtype[0], int(c.subtype[1:])
    return {"A": r + 1, "D": 2 * r - 2, "E": {6: 12, 7: 18, 8: 30}.get(r, 0)}[t]


# --- roots ----------------------------------------------------------------

def symmetric_form(Q: Quiver, u: Sequence[int], v: Sequence[int]) -> int:
    return euler_form(Q, u, v) + euler_form(Q, v, u)


def positive_roots(Q: Quiver) -> list[Vec]:
    """All positive roots of a Dynkin quiver, sorted by height then lexicographically."""
    cls = classify(Q)
    if isinstance(cls, list) or cls.kind != "Dynkin":
        raise ValueError(f"positive_roots needs a connected Dynkin quiver, got {cls}")
    n = Q.n
    simples = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simples)
    queue = deque(simples)
    while queue:
        r = queue.popleft()
        for i, e in enumerate(simples):
            k = symmetric_form(Q, r, e)
            t = tuple(r[j] - k * e[j] for j in range(n))
            if all(x >= 0 for x in t) and any(t) and t not in found:
                found.add(t)
                queue.append(t)
    return sorted(found, key=lambda r: (sum(r), r))


# --- generic Hom / Ext ------------------------------------------------------

class GenericityError(RuntimeError):
    pass


def generic_hom_ext(Q: Quiver, alpha: Sequence[int], beta: Sequence[int], seed: int = 42,
                    retries: int = 3) -> tuple[int, int]:
    """Generic (hom, ext) between representations of dimensions alpha and beta.

    Two independent random samples must agree; otherwise resample.
    """
    from .schofield import hom_dimension, random_representation

    alpha, beta = tuple(alpha), tuple(beta)
    if any(x < 0 for x in alpha + beta):
        raise ValueError("dimension vectors must be nonnegative")
    chi = euler_form(Q, alpha, beta)
    rng = random.Random(seed)
    for _ in range(retries):
        values = []
        for _ in range(2):
            V = random_representation(Q, alpha, rng.randrange(2**63))
            W = random_representation(Q, beta, rng.randrange(2**63))
            values.append(hom_dimension(Q, V, W))
        if values[0] == values[1]:
            return values[0], values[0] - chi
    raise GenericityError(f"hom samples disagree for {alpha} -> {beta}")
