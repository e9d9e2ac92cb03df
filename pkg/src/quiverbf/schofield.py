"""Concrete representations, the d^V_W block matrix and Schofield determinants."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import flint

from .quiver import GenericityError, Quiver, euler_form
from .sparsepoly import SparsePoly, determinant

ENTRY_RANGE = 99


@dataclass(frozen=True)
class Representation:
    quiver: Quiver
    dims: tuple[int, ...]
    maps: dict  # arrow id -> matrix (list of rows), shape dim(head) x dim(tail)

    def __post_init__(self):
        Q = self.quiver
        for a in Q.arrows:
            M = self.maps[a.id]
            rows, cols = self.dim(a.head), self.dim(a.tail)
            if len(M) != rows or any(len(r) != cols for r in M):
                raise ValueError(f"matrix for arrow {a.id} should be {rows}x{cols}")

    def dim(self, v) -> int:
        return self.dims[self.quiver.index(v)]


def random_representation(Q: Quiver, dims: Sequence[int], seed: int) -> Representation:
    rng = random.Random(seed)
    dims = tuple(dims)
    maps = {}
    for a in Q.arrows:
        r, c = dims[Q.index(a.head)], dims[Q.index(a.tail)]
        maps[a.id] = [[rng.randint(-ENTRY_RANGE, ENTRY_RANGE) for _ in range(c)] for _ in range(r)]
    return Representation(Q, dims, maps)


@dataclass(frozen=True)
class BlockMatrix:
    row_labels: tuple  # (arrow id, copy index) per row
    col_labels: tuple  # (vertex, copy index) per column
    entries: list  # dense rows; entries are ints or SparsePoly

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)


def block_matrix(Q: Quiver, alpha: Sequence[int], beta: Sequence[int], V: Representation, W_maps: dict) -> BlockMatrix:
    """Matrix of d^V_W : sum_x Hom(V_x, W_x) -> sum_a Hom(V_ta, W_ha).

    Row block of arrow a holds I (x) W(a) in column block ta and
    V(a)^t (x) I in column block ha; the sign of the latter is dropped.
    """
    col_start, col_labels = {}, []
    for v in Q.vertices:
        col_start[v] = len(col_labels)
        size = alpha[Q.index(v)] * beta[Q.index(v)]
        col_labels.extend((v, k) for k in range(size))
    rows, row_labels = [], []
    ncols = len(col_labels)
    for a in Q.arrows:
        at, ah = alpha[Q.index(a.tail)], alpha[Q.index(a.head)]
        bt, bh = beta[Q.index(a.tail)], beta[Q.index(a.head)]
        W, Va = W_maps[a.id], V.maps[a.id]
        for p in range(at):
            for r in range(bh):
                row = [0] * ncols
                for c in range(bt):
                    row[col_start[a.tail] + p * bt + c] = W[r][c]
                for q in range(ah):
                    row[col_start[a.head] + q * bh + r] = Va[q][p]
                rows.append(row)
                row_labels.append((a.id, p * bh + r))
    return BlockMatrix(tuple(row_labels), tuple(col_labels), rows)


def exact_rank(rows: list[list[int]], ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return flint.fmpz_mat(rows).rank()


def hom_dimension(Q: Quiver, V: Representation, W: Representation) -> int:
    bm = block_matrix(Q, V.dims, W.dims, V, W.maps)
    ncols = len(bm.col_labels)
    return ncols - exact_rank(bm.entries, ncols)


def ext_dimension(Q: Quiver, V: Representation, W: Representation) -> int:
    return hom_dimension(Q, V, W) - euler_form(Q, V.dims, W.dims)


def generic_variables(Q: Quiver, beta: Sequence[int]) -> tuple[dict, tuple[str, ...]]:
    """Matrices of distinct variables for every arrow; names are ``<arrow>_<row>_<col>``."""
    names = []
    layout = {}
    for a in Q.arrows:
        r, c = beta[Q.index(a.head)], beta[Q.index(a.tail)]
        layout[a.id] = [[f"{a.id}_{i}_{j}" for j in range(c)] for i in range(r)]
        names.extend(n for row in layout[a.id] for n in row)
    gens = tuple(names)
    maps = {aid: [[SparsePoly.var(gens, n) for n in row] for row in M] for aid, M in layout.items()}
    return maps, gens


def build_schofield(Q: Quiver, beta: Sequence[int], V: Representation) -> tuple[BlockMatrix, SparsePoly]:
    """c^V as an explicit polynomial in the entries of a generic representation of dimension beta."""
    alpha = V.dims
    if euler_form(Q, alpha, beta) != 0:
        raise ValueError("block matrix is not square: <alpha, beta> != 0")
    W_maps, gens = generic_variables(Q, beta)
    bm = block_matrix(Q, alpha, beta, V, W_maps)
    return bm, determinant(bm.entries, gens)


def random_exceptional(Q: Quiver, alpha: Sequence[int], seed: int = 42, tries: int = 3) -> Representation:
    """Random integer representation with Ext(V, V) = 0, certified by exact rank."""
    alpha = tuple(alpha)
    if any(x < 0 for x in alpha) or not any(alpha):
        raise ValueError("alpha must be a nonzero nonnegative vector")
    if euler_form(Q, alpha, alpha) != 1:
        raise ValueError(f"{alpha} is not a real root (<alpha, alpha> != 1)")
    rng = random.Random(seed)
    for _ in range(tries):
        V = random_representation(Q, alpha, rng.randrange(2**63))
        if ext_dimension(Q, V, V) == 0:
            return V
    raise GenericityError(f"no exceptional sample of dimension {alpha} after {tries} tries")


def schofield_degree(Q: Quiver, beta: Sequence[int], V: Representation, seed: int = 0) -> int:
    """Total degree of c^V without expanding it.

    det d^V_W along the line W = t*W0 is a polynomial in t of degree at most
    the matrix size; its exact degree (for generic W0) is read from finite
    differences of integer determinants.
    """
    if euler_form(Q, V.dims, beta) != 0:
        raise ValueError("block matrix is not square: <alpha, beta> != 0")
    W0 = random_representation(Q, beta, seed)
    size = sum(a * b for a, b in zip(V.dims, beta))
    if size == 0:
        return 0
    values = []
    for t in range(size + 1):
        maps = {aid: [[t * x for x in row] for row in M] for aid, M in W0.maps.items()}
        values.append(int(flint.fmpz_mat(block_matrix(Q, V.dims, beta, V, maps).entries).det()))
    deg = 0
    diffs = values
    for k in range(1, size + 1):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if any(diffs):
            deg = k
    return deg

