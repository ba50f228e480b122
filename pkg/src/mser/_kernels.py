"""Hot loops: triangle census over present edges and the pairwise covariance sum.

Each kernel has a numba version and a pure-numpy version with identical
results.  Set ``MSER_DISABLE_NUMBA=1`` before import to force the numpy path
(also used automatically when numba is not importable).
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_DISABLED = os.environ.get("MSER_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = numba is not None and not NUMBA_DISABLED


# ---------------------------------------------------------------- census

def _census_loops(adj, down, eu, ev, el):
    # Canonical indices are anchored on their first intra edge (a, b), a < b,
    # lying in layer i.  1D/3D apexes w satisfy b < w; 2D apexes are any w.
    L = adj.shape[0]
    n = adj.shape[1]
    w1 = 0
    w2 = 0
    w3 = 0
    for e in range(eu.shape[0]):
        a = eu[e]
        b = ev[e]
        i = el[e]
        for w in range(b + 1, n):
            if adj[i, a, w] and adj[i, b, w]:
                w1 += 1
        for j in range(L):
            if j == i:
                continue
            if down[i, j, a] and down[i, j, b]:
                for w in range(n):
                    if adj[j, a, w] and adj[j, b, w]:
                        w2 += 1
            if L >= 3 and down[i, j, b]:
                for w in range(b + 1, n):
                    if not adj[j, b, w]:
                        continue
                    for k in range(L):
                        if k == i or k == j:
                            continue
                        if adj[k, w, a] and down[j, k, w] and down[k, i, a]:
                            w3 += 1
    out = np.empty(3, dtype=np.int64)
    out[0] = w1
    out[1] = w2
    out[2] = w3
    return out


def census_numpy(adj, down, eu, ev, el):
    L, n, _ = adj.shape
    A = adj.astype(bool)
    D = down.astype(bool)
    idx = np.arange(n)
    out = np.zeros(3, dtype=np.int64)
    for i in range(L):
        sel = el == i
        a = eu[sel]
        b = ev[sel]
        if a.size == 0:
            continue
        later = idx[None, :] > b[:, None]
        out[0] += np.count_nonzero(A[i][a] & A[i][b] & later)
        for j in range(L):
            if j == i:
                continue
            ok = D[i, j, a] & D[i, j, b]
            out[1] += np.count_nonzero(A[j][a[ok]] & A[j][b[ok]])
            for k in range(L):
                if k == i or k == j:
                    continue
                ok = D[i, j, b] & D[k, i, a]
                hit = A[j][b[ok]] & A[k][a[ok]] & later[ok] & D[j, k][None, :]
                out[2] += np.count_nonzero(hit)
    return out


# ------------------------------------------------------ covariance oracle

def _pair_cov_loops(edges, nedges, kind, pi, prob):
    # edges[g, :nedges[g]] are the edge ids required by index g.
    G = edges.shape[0]
    sums = np.zeros((3, 3))
    comp = np.zeros((3, 3))
    for a in range(G):
        na = nedges[a]
        for b in range(G):
            if b == a:
                continue
            nb = nedges[b]
            extra = 1.0
            shared = 0
            for t in range(nb):
                e = edges[b, t]
                found = False
                for s in range(na):
                    if edges[a, s] == e:
                        found = True
                        break
                if found:
                    shared += 1
                else:
                    extra *= prob[e]
            if shared == 0:
                continue
            cov = pi[a] * extra - pi[a] * pi[b]
            ta = kind[a]
            tb = kind[b]
            # Neumaier compensated accumulation
            s0 = sums[ta, tb]
            t0 = s0 + cov
            if abs(s0) >= abs(cov):
                comp[ta, tb] += (s0 - t0) + cov
            else:
                comp[ta, tb] += (cov - t0) + s0
            sums[ta, tb] = t0
    return sums + comp


def pair_cov_numpy(edges, nedges, kind, pi, prob):
    G = edges.shape[0]
    E = prob.shape[0]
    inc = np.zeros((G, E), dtype=bool)
    rows = np.repeat(np.arange(G), nedges)
    cols = np.concatenate([edges[g, : nedges[g]] for g in range(G)]) if G else np.empty(0, np.int64)
    inc[rows, cols] = True
    sums = np.zeros((3, 3))
    for a in range(G):
        shared = (inc & inc[a]).any(axis=1)
        shared[a] = False
        if not shared.any():
            continue
        beta = np.flatnonzero(shared)
        union = inc[beta] | inc[a]
        joint = np.where(union, prob[None, :], 1.0).prod(axis=1)
        cov = joint - pi[a] * pi[beta]
        for t in range(3):
            m = kind[beta] == t
            if m.any():
                sums[kind[a], t] += np.sum(cov[m])
    return sums


if USE_NUMBA:
    census_numba = numba.njit(nogil=True, cache=True)(_census_loops)
    pair_cov_numba = numba.njit(nogil=True, cache=True)(_pair_cov_loops)
    census = census_numba
    pair_cov = pair_cov_numba
else:
    census_numba = None
    pair_cov_numba = None
    census = census_numpy
    pair_cov = pair_cov_numpy


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
