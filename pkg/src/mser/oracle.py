"""Brute-force covariance sums between triangle indicators.

Every edge indicator of the MSER model is independent, so for two canonical
indices the joint presence probability is the product of the probabilities
of the *union* of their required edges.  Summing ``Cov(X_a, X_b)`` over all
ordered pairs of distinct indices, split by triangle type, gives exact
values of the class covariance sums with no combinatorial case analysis.
"""
from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from . import _kernels
from .census import TriangleIndex, gamma_sizes, iter_gamma
from .model import MserParams, index_probability
from .moments import CovarianceBoundReport

MAX_PAIR_EVALUATIONS = 10**8


class OracleSizeError(ValueError):
    pass


def _edge_ids(n: int, L: int):
    npairs = comb(n, 2)
    pair_id = {pr: k for k, pr in enumerate(combinations(range(n), 2))}
    layer_pair_id = {pr: k for k, pr in enumerate(combinations(range(L), 2))}

    def intra(layer, u, v):
        return layer * npairs + pair_id[(u, v)]

    def down(i, j, u):
        return L * npairs + layer_pair_id[(i, j)] * n + u

    size = L * npairs + len(layer_pair_id) * n
    return intra, down, size


def index_table(n: int, L: int) -> tuple[list[TriangleIndex], np.ndarray, np.ndarray, np.ndarray, int]:
    """Canonical indices with their padded edge-id rows, edge counts and types."""
    intra, down, size = _edge_ids(n, L)
    indices = list(iter_gamma(n, L))
    edges = np.full((len(indices), 6), -1, dtype=np.int64)
    nedges = np.zeros(len(indices), dtype=np.int64)
    kind = np.zeros(len(indices), dtype=np.int64)
    for g, idx in enumerate(indices):
        ids = [intra(*e) for e in idx.intra_edges()] + [down(*d) for d in idx.down_edges()]
        edges[g, : len(ids)] = ids
        nedges[g] = len(ids)
        kind[g] = int(idx.type) - 1
    return indices, edges, nedges, kind, size


def edge_probabilities(params: MserParams, n: int) -> np.ndarray:
    L = params.L
    npairs = comb(n, 2)
    prob = np.empty(L * npairs + comb(L, 2) * n)
    for i, p in enumerate(params.p):
        prob[i * npairs:(i + 1) * npairs] = p
    prob[L * npairs:] = params.q
    return prob


def class_covariance_sums(params: MserParams, n: int, kernel=None) -> np.ndarray:
    """3x3 matrix ``S[s, t]`` = sum of Cov(X_a, X_b) over a of type s+1, b of type t+1, a != b."""
    total = sum(gamma_sizes(n, params.L))
    if total * total > MAX_PAIR_EVALUATIONS:
        raise OracleSizeError(
            f"{total} indices give {total * total} pair evaluations (limit {MAX_PAIR_EVALUATIONS})"
        )
    if total == 0:
        return np.zeros((3, 3))
    indices, edges, nedges, kind, _ = index_table(n, params.L)
    pi = np.array([index_probability(params, idx) for idx in indices])
    prob = edge_probabilities(params, n)
    kernel = kernel or _kernels.pair_cov
    return np.asarray(kernel(edges, nedges, kind, pi, prob))


def exact_covariance_oracle(params: MserParams, n: int, kernel=None) -> CovarianceBoundReport:
    s = class_covariance_sums(params, n, kernel=kernel)
    return CovarianceBoundReport(
        r11=float(s[0, 0]),
        r21=float(s[1, 0]),
        r31=float(s[2, 0]),
        r22=float(s[1, 1]),
        r23=float(s[1, 2]),
        r33=float(s[2, 2]),
        exact=frozenset({"r11", "r21", "r31", "r22", "r23", "r33"}),
    )
