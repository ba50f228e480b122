"""1D, 2D and 3D triangle censuses of multislice networks.

Two independent routes produce the same totals:

* :func:`count_by_trace` evaluates traces of products of the intra-layer
  supra-matrix ``A`` and inter-layer supra-matrix ``C``; every triangle is
  traversed by exactly six closed walks.
* :func:`count_by_enumeration` sums the presence indicators of canonical
  triangle indices directly.

A canonical index ``(nodes=(a1, a2, a3), layers=(i, j, k))`` stands for the
closed walk a1^i - a2^i - a2^j - a3^j - a3^k - a1^k - a1^i.  1D indices have
``i == j == k``, 2D indices have ``j == k != i`` (the single edge a1-a2 lives
in layer ``i``), 3D indices have pairwise distinct layers.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb
from typing import Iterator

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .network import MultisliceNetwork, SupraMatrices, supra_matrices


class CensusConsistencyError(RuntimeError):
    """A walk count was not divisible by six, or the two census routes disagree."""


class TriangleType(enum.IntEnum):
    ONE_D = 1
    TWO_D = 2
    THREE_D = 3

    @property
    def label(self) -> str:
        return f"{self.value}D"


@dataclass(frozen=True, order=True)
class TriangleIndex:
    nodes: tuple[int, int, int]
    layers: tuple[int, int, int]

    @property
    def type(self) -> TriangleType:
        i, j, k = self.layers
        if i == j == k:
            return TriangleType.ONE_D
        if j == k:
            return TriangleType.TWO_D
        return TriangleType.THREE_D

    def intra_edges(self) -> tuple[tuple[int, int, int], ...]:
        """Required intra-layer edges as ``(layer, u, v)`` with ``u < v``."""
        a1, a2, a3 = self.nodes
        i, j, k = self.layers

        def e(layer, u, v):
            return (layer, u, v) if u < v else (layer, v, u)

        return (e(i, a1, a2), e(j, a2, a3), e(k, a3, a1))

    def down_edges(self) -> tuple[tuple[int, int, int], ...]:
        """Required inter-layer links as ``(i, j, u)`` with ``i < j``."""
        a1, a2, a3 = self.nodes
        i, j, k = self.layers
        out = []
        for x, y, u in ((i, j, a2), (j, k, a3), (k, i, a1)):
            if x != y:
                out.append((min(x, y), max(x, y), u))
        return tuple(out)

    def is_present(self, net: MultisliceNetwork) -> bool:
        adj, down = net.adjacency, net.down
        return all(adj[l, u, v] for l, u, v in self.intra_edges()) and all(
            down[x, y, u] for x, y, u in self.down_edges()
        )


@dataclass(frozen=True)
class TriangleCounts:
    w1: int
    w2: int
    w3: int

    @property
    def total(self) -> int:
        return self.w1 + self.w2 + self.w3

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.w1, self.w2, self.w3)

    def __getitem__(self, t: TriangleType | int) -> int:
        return self.as_tuple()[int(t) - 1]


def gamma_sizes(n: int, L: int) -> tuple[int, int, int]:
    """Sizes of the canonical index sets for 1D, 2D and 3D triangles."""
    c = comb(n, 3)
    return (c * L, 6 * c * comb(L, 2), 6 * c * comb(L, 3))


def iter_gamma(n: int, L: int) -> Iterator[TriangleIndex]:
    """All canonical indices, grouped by node triple then type."""
    for tri in combinations(range(n), 3):
        for i in range(L):
            yield TriangleIndex(tri, (i, i, i))
        # the single-layer edge may be any of the three pairs of the triple
        for a1, a2, a3 in ((tri[0], tri[1], tri[2]), (tri[0], tri[2], tri[1]), (tri[1], tri[2], tri[0])):
            for i, j in permutations(range(L), 2):
                yield TriangleIndex((a1, a2, a3), (i, j, j))
        for ijk in permutations(range(L), 3):
            yield TriangleIndex(tri, ijk)


# ------------------------------------------------------------------ trace


def _trace(*mats: sp.spmatrix) -> int:
    prod = mats[0]
    for m in mats[1:-1]:
        prod = prod @ m
    # Tr(XY) = sum(X * Y^T) without forming XY
    return int(prod.multiply(mats[-1].T).sum())


def _sixth(value: int, what: str) -> int:
    q, r = divmod(value, 6)
    if r:
        raise CensusConsistencyError(f"{what} = {value} is not divisible by 6")
    return q


def count_by_trace(sup: SupraMatrices) -> TriangleCounts:
    A, C = sup.A.astype(np.int64), sup.C.astype(np.int64)
    t1 = _trace(A, A, A)
    t2 = _trace(A, A, C, A, C) + _trace(A, C, A, A, C) + _trace(A, C, A, C, A)
    t3 = _trace(A, C, A, C, A, C)
    return TriangleCounts(_sixth(t1, "Tr(AAA)"), _sixth(t2, "2D trace sum"), _sixth(t3, "Tr(ACACAC)"))


# ------------------------------------------------------------ enumeration


def _flat_edges(net: MultisliceNetwork) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    arrs = [net.edge_array(i) for i in range(net.L)]
    eu = np.concatenate([a[:, 0] for a in arrs])
    ev = np.concatenate([a[:, 1] for a in arrs])
    el = np.concatenate([np.full(len(a), i, dtype=np.int64) for i, a in enumerate(arrs)])
    return eu, ev, el


def census_arrays(adj: np.ndarray, down: np.ndarray, eu, ev, el, kernel=None) -> np.ndarray:
    """Raw census on dense arrays; returns ``[w1, w2, w3]`` as int64."""
    kernel = kernel or _kernels.census
    return kernel(adj, down, eu, ev, el)


def count_by_enumeration(net: MultisliceNetwork, kernel=None) -> TriangleCounts:
    if net.n < 3:
        return TriangleCounts(0, 0, 0)
    w = census_arrays(net.adjacency, net.down, *_flat_edges(net), kernel=kernel)
    return TriangleCounts(int(w[0]), int(w[1]), int(w[2]))


def enumerate_present(
    net: MultisliceNetwork, type_filter: TriangleType | None = None
) -> list[TriangleIndex]:
    """Sorted canonical indices whose triangle is present in ``net``."""
    out: list[TriangleIndex] = []
    if net.n < 3:
        return out
    A = net.adjacency.astype(bool)
    D = net.down.astype(bool)
    L, n = net.L, net.n
    want = (lambda t: True) if type_filter is None else (lambda t: t == type_filter)
    for i in range(L):
        for a, b in net.edge_array(i):
            a, b = int(a), int(b)
            if want(TriangleType.ONE_D):
                for w in np.flatnonzero(A[i, a] & A[i, b]):
                    if w > b:
                        out.append(TriangleIndex((a, b, int(w)), (i, i, i)))
            for j in range(L):
                if j == i:
                    continue
                if want(TriangleType.TWO_D) and D[i, j, a] and D[i, j, b]:
                    for w in np.flatnonzero(A[j, a] & A[j, b]):
                        out.append(TriangleIndex((a, b, int(w)), (i, j, j)))
                if want(TriangleType.THREE_D) and D[i, j, b]:
                    for w in np.flatnonzero(A[j, b]):
                        if w <= b:
                            continue
                        for k in range(L):
                            if k not in (i, j) and A[k, w, a] and D[j, k, w] and D[k, i, a]:
                                out.append(TriangleIndex((a, b, int(w)), (i, j, k)))
    out.sort()
    return out


def census(net: MultisliceNetwork, sup: SupraMatrices | None = None) -> tuple[TriangleCounts, TriangleCounts]:
    """Run both routes; raise :class:`CensusConsistencyError` if they disagree."""
    by_trace = count_by_trace(sup if sup is not None else supra_matrices(net))
    by_enum = count_by_enumeration(net)
    if by_trace != by_enum:
        raise CensusConsistencyError(
            f"trace census {by_trace.as_tuple()} != enumeration census {by_enum.as_tuple()}"
        )
    return by_trace, by_enum
