"""Multislice networks on a shared set of basis nodes.

A network has ``n`` basis nodes and ``L`` layers.  Node ``u`` has one copy
per layer; intra-layer edges join copies inside one layer, and inter-layer
("down") links join the copies of the *same* node in two layers.  Nodes and
layers are indexed from 0.

Supra-matrix rows are ordered layer-major: copy ``u`` of layer ``i`` sits at
row ``i * n + u``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

FULL = "FULL"


class NetworkError(ValueError):
    """Raised when a record cannot be part of a valid multislice network."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=True)
class MultisliceNetwork:
    """Immutable node-aligned multislice network.

    ``intra[i]`` holds the edges of layer ``i`` as pairs ``(u, v)`` with
    ``u < v``.  ``coupling`` holds triples ``(i, j, u)`` with ``i < j`` meaning
    that ``u`` in layer ``i`` is linked to ``u`` in layer ``j``.
    """

    n: int
    L: int
    intra: tuple[frozenset[tuple[int, int]], ...]
    coupling: frozenset[tuple[int, int, int]]
    node_labels: tuple[str, ...] | None = None
    layer_labels: tuple[str, ...] | None = None

    @property
    def edge_counts(self) -> tuple[int, ...]:
        return tuple(len(e) for e in self.intra)

    @property
    def num_couplings(self) -> int:
        return len(self.coupling)

    @property
    def max_couplings(self) -> int:
        return self.n * self.L * (self.L - 1) // 2

    @property
    def is_fully_coupled(self) -> bool:
        return len(self.coupling) == self.max_couplings

    def edge_array(self, layer: int) -> np.ndarray:
        """Sorted ``(m, 2)`` int64 array of the edges of one layer."""
        return self._edge_arrays[layer]

    @cached_property
    def _edge_arrays(self) -> tuple[np.ndarray, ...]:
        out = []
        for edges in self.intra:
            arr = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
            out.append(_readonly(arr))
        return tuple(out)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense ``(L, n, n)`` uint8 tensor of intra-layer adjacency."""
        adj = np.zeros((self.L, self.n, self.n), dtype=np.uint8)
        for i, e in enumerate(self._edge_arrays):
            adj[i, e[:, 0], e[:, 1]] = 1
            adj[i, e[:, 1], e[:, 0]] = 1
        return _readonly(adj)

    @cached_property
    def down(self) -> np.ndarray:
        """Dense ``(L, L, n)`` uint8 tensor; ``down[i, j, u]`` is 1 iff u^i ~ u^j."""
        d = np.zeros((self.L, self.L, self.n), dtype=np.uint8)
        for i, j, u in self.coupling:
            d[i, j, u] = 1
            d[j, i, u] = 1
        return _readonly(d)

    def edge_records(self) -> list[tuple[int, int, int]]:
        return [(i, u, v) for i, edges in enumerate(self.intra) for u, v in sorted(edges)]

    def coupling_records(self) -> list[tuple[int, int, int]]:
        return sorted(self.coupling)

    def node_label(self, u: int) -> str:
        return self.node_labels[u] if self.node_labels else str(u)

    def layer_label(self, i: int) -> str:
        return self.layer_labels[i] if self.layer_labels else str(i)

    def permute_layers(self, perm: Sequence[int]) -> "MultisliceNetwork":
        """Relabel layer ``i`` as ``perm[i]``."""
        if sorted(perm) != list(range(self.L)):
            raise NetworkError(f"not a permutation of range({self.L}): {list(perm)}")
        intra: list[frozenset] = [frozenset()] * self.L
        for i, edges in enumerate(self.intra):
            intra[perm[i]] = edges
        coupling = frozenset(
            (min(perm[i], perm[j]), max(perm[i], perm[j]), u) for i, j, u in self.coupling
        )
        labels = None
        if self.layer_labels is not None:
            moved = [""] * self.L
            for i, lab in enumerate(self.layer_labels):
                moved[perm[i]] = lab
            labels = tuple(moved)
        return MultisliceNetwork(self.n, self.L, tuple(intra), coupling, self.node_labels, labels)

    def without_coupling(self) -> "MultisliceNetwork":
        return MultisliceNetwork(self.n, self.L, self.intra, frozenset(), self.node_labels, self.layer_labels)


def _check_index(value, bound: int, what: str, record) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise NetworkError(f"{what} must be an integer in record {record!r}")
    if not 0 <= value < bound:
        raise NetworkError(f"{what} {value} out of range [0, {bound}) in record {record!r}")
    return int(value)


def full_coupling(n: int, L: int) -> frozenset[tuple[int, int, int]]:
    return frozenset((i, j, u) for i, j in combinations(range(L), 2) for u in range(n))


def build_network(
    n: int,
    L: int,
    intra_edges: Iterable[tuple[int, int, int]],
    coupled_nodes: Iterable[tuple[int, int, int]] | str = FULL,
    *,
    node_labels: Sequence[str] | None = None,
    layer_labels: Sequence[str] | None = None,
) -> MultisliceNetwork:
    """Validate and deduplicate edge records into a :class:`MultisliceNetwork`.

    ``intra_edges`` are ``(layer, u, v)`` records; ``coupled_nodes`` are
    ``(i, j, u)`` records or the token :data:`FULL`, which couples every node
    across every pair of layers.
    """
    if n < 1:
        raise NetworkError(f"node count must be >= 1, got {n}")
    if L < 1:
        raise NetworkError(f"layer count must be >= 1, got {L}")
    layers: list[set[tuple[int, int]]] = [set() for _ in range(L)]
    for rec in intra_edges:
        if len(rec) != 3:
            raise NetworkError(f"intra edge record must be (layer, u, v): {rec!r}")
        i = _check_index(rec[0], L, "layer", rec)
        u = _check_index(rec[1], n, "node", rec)
        v = _check_index(rec[2], n, "node", rec)
        if u == v:
            raise NetworkError(f"self-loop in record {rec!r}")
        layers[i].add((u, v) if u < v else (v, u))

    if isinstance(coupled_nodes, str):
        if coupled_nodes != FULL:
            raise NetworkError(f"unknown coupling token {coupled_nodes!r}")
        coupling = full_coupling(n, L)
    else:
        cset = set()
        for rec in coupled_nodes:
            if len(rec) != 3:
                raise NetworkError(f"coupling record must be (i, j, u): {rec!r}")
            i = _check_index(rec[0], L, "layer", rec)
            j = _check_index(rec[1], L, "layer", rec)
            u = _check_index(rec[2], n, "node", rec)
            if i == j:
                raise NetworkError(f"coupling within a single layer in record {rec!r}")
            cset.add((min(i, j), max(i, j), u))
        coupling = frozenset(cset)

    if node_labels is not None and len(node_labels) != n:
        raise NetworkError(f"expected {n} node labels, got {len(node_labels)}")
    if layer_labels is not None and len(layer_labels) != L:
        raise NetworkError(f"expected {L} layer labels, got {len(layer_labels)}")
    return MultisliceNetwork(
        n=n,
        L=L,
        intra=tuple(frozenset(e) for e in layers),
        coupling=coupling,
        node_labels=_labels_or_none(node_labels),
        layer_labels=_labels_or_none(layer_labels),
    )


def _labels_or_none(labels: Sequence[str] | None) -> tuple[str, ...] | None:
    # positional labels "0", "1", ... carry no information
    if labels is None:
        return None
    labels = tuple(str(x) for x in labels)
    return None if labels == tuple(str(k) for k in range(len(labels))) else labels


@dataclass(frozen=True)
class SupraMatrices:
    """Intra-layer (``A``) and inter-layer (``C``) supra-matrices in CSR form."""

    A: sp.csr_matrix
    C: sp.csr_matrix
    n: int
    L: int

    @property
    def supra_adjacency(self) -> sp.csr_matrix:
        return (self.A + self.C).tocsr()


def supra_matrices(net: MultisliceNetwork) -> SupraMatrices:
    n, L = net.n, net.L
    size = n * L
    rows, cols = [], []
    for i, e in enumerate(net._edge_arrays):
        rows.append(i * n + e[:, 0])
        cols.append(i * n + e[:, 1])
    r = np.concatenate(rows) if rows else np.empty(0, np.int64)
    c = np.concatenate(cols) if cols else np.empty(0, np.int64)
    A = sp.coo_matrix(
        (np.ones(2 * len(r), dtype=np.int64), (np.r_[r, c], np.r_[c, r])), shape=(size, size)
    ).tocsr()

    cp = np.array(net.coupling_records(), dtype=np.int64).reshape(-1, 3)
    r = cp[:, 0] * n + cp[:, 2]
    c = cp[:, 1] * n + cp[:, 2]
    C = sp.coo_matrix(
        (np.ones(2 * len(r), dtype=np.int64), (np.r_[r, c], np.r_[c, r])), shape=(size, size)
    ).tocsr()
    return SupraMatrices(A=A, C=C, n=n, L=L)
