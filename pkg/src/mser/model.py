"""The multislice Erdos-Renyi (MSER) model: sampling and maximum likelihood.

Every intra-layer pair of layer ``i`` is an edge independently with
probability ``p[i]``; every node-aligned inter-layer link is present
independently with probability ``q``.

Randomness is keyed by ``(seed, replicate, slot)`` through
:class:`numpy.random.SeedSequence` spawn keys feeding a Philox counter-based
generator.  Slot ``i < L`` drives layer ``i`` and slot ``L`` drives the
couplings, so a replicate's network does not depend on which other
replicates were drawn or in which order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .census import TriangleIndex, TriangleType
from .network import MultisliceNetwork, build_network, full_coupling


class ParamsError(ValueError):
    pass


@dataclass(frozen=True)
class MserParams:
    p: tuple[float, ...]
    q: float = 1.0

    def __post_init__(self):
        p = tuple(float(x) for x in self.p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", float(self.q))
        if len(p) < 1:
            raise ParamsError("at least one layer probability is required")
        for x in p + (self.q,):
            if not 0.0 <= x <= 1.0:
                raise ParamsError(f"probability {x} outside [0, 1]")

    @property
    def L(self) -> int:
        return len(self.p)

    @property
    def is_uniform(self) -> bool:
        return all(x == self.p[0] for x in self.p)


@lru_cache(maxsize=32)
def _pair_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    u, v = np.triu_indices(n, 1)
    u = u.astype(np.int64)
    v = v.astype(np.int64)
    u.setflags(write=False)
    v.setflags(write=False)
    return u, v


def _stream(seed: int, replicate: int, slot: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replicate), int(slot)))
    return np.random.Generator(np.random.Philox(ss))


def _bernoulli_subset(rng: np.random.Generator, size: int, prob: float) -> np.ndarray:
    # Binomial count then a uniform subset has the law of `size` independent
    # Bernoulli(prob) trials, at O(count) cost in the sparse regime.
    if prob <= 0.0 or size == 0:
        return np.empty(0, dtype=np.int64)
    if prob >= 1.0:
        return np.arange(size, dtype=np.int64)
    m = int(rng.binomial(size, prob))
    return np.sort(rng.choice(size, size=m, replace=False)).astype(np.int64)


@dataclass(frozen=True)
class SampledArrays:
    """Array form of one sampled network, as consumed by the census kernel."""

    adj: np.ndarray
    down: np.ndarray
    eu: np.ndarray
    ev: np.ndarray
    el: np.ndarray
    couplings: np.ndarray  # (m, 3) rows (i, j, u), i < j


def sample_arrays(params: MserParams, n: int, seed: int, replicate: int = 0) -> SampledArrays:
    L = params.L
    pu, pv = _pair_table(n)
    npairs = len(pu)
    adj = np.zeros((L, n, n), dtype=np.uint8)
    eus, evs, els = [], [], []
    for i, p in enumerate(params.p):
        picked = _bernoulli_subset(_stream(seed, replicate, i), npairs, p)
        u, v = pu[picked], pv[picked]
        adj[i, u, v] = 1
        adj[i, v, u] = 1
        eus.append(u)
        evs.append(v)
        els.append(np.full(len(u), i, dtype=np.int64))

    down = np.zeros((L, L, n), dtype=np.uint8)
    layer_pairs = list(combinations(range(L), 2))
    slots = len(layer_pairs) * n
    if params.q >= 1.0:
        picked = np.arange(slots, dtype=np.int64)
    else:
        picked = _bernoulli_subset(_stream(seed, replicate, L), slots, params.q)
    lp = np.array(layer_pairs, dtype=np.int64).reshape(-1, 2)
    ci, cj, cu = lp[picked // n, 0], lp[picked // n, 1], picked % n
    down[ci, cj, cu] = 1
    down[cj, ci, cu] = 1
    return SampledArrays(
        adj=adj,
        down=down,
        eu=np.concatenate(eus),
        ev=np.concatenate(evs),
        el=np.concatenate(els),
        couplings=np.stack([ci, cj, cu], axis=1),
    )


def sample(params: MserParams, n: int, seed: int, replicate: int = 0) -> MultisliceNetwork:
    """Draw one MSER network; bit-identical for identical arguments."""
    if n < 1:
        raise ParamsError(f"node count must be >= 1, got {n}")
    arr = sample_arrays(params, n, seed, replicate)
    edges = zip(arr.el.tolist(), arr.eu.tolist(), arr.ev.tolist())
    if params.q >= 1.0:
        coupling = full_coupling(n, params.L)
    else:
        coupling = [tuple(r) for r in arr.couplings.tolist()]
    return build_network(n, params.L, edges, coupling)


def fit_mle(net: MultisliceNetwork, pooled: bool, q: float = 1.0) -> MserParams:
    """Maximum likelihood edge densities; ``q`` is taken as given, not estimated.

    ``pooled=True`` fits one density shared by all layers.
    """
    if net.n < 2:
        raise ParamsError("edge density is undefined for fewer than two nodes")
    slots = comb(net.n, 2)
    counts = net.edge_counts
    if pooled:
        p = sum(counts) / (net.L * slots)
        return MserParams(tuple([p] * net.L), q)
    return MserParams(tuple(c / slots for c in counts), q)


def index_probability(params: MserParams, idx: TriangleIndex) -> float:
    """Probability that the canonical triangle ``idx`` is present."""
    p, q = params.p, params.q
    i, j, k = idx.layers
    t = idx.type
    if t is TriangleType.ONE_D:
        return p[i] ** 3
    if t is TriangleType.TWO_D:
        return p[i] * p[j] ** 2 * q**2
    return p[i] * p[j] * p[k] * q**3


def as_params(p: Sequence[float] | float, L: int | None = None, q: float = 1.0) -> MserParams:
    if isinstance(p, (int, float)):
        if L is None:
            raise ParamsError("layer count is required for a scalar density")
        return MserParams(tuple([float(p)] * L), q)
    p = tuple(float(x) for x in p)
    if L is not None and len(p) != L:
        if len(p) != 1:
            raise ParamsError(f"got {len(p)} densities for {L} layers")
        p = p * L
    return MserParams(p, q)
