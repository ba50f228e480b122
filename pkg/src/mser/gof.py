"""Monte Carlo goodness-of-fit test of the MSER null via triangle counts.

Replicate ``r`` is drawn from the stream keyed by ``(master_seed, r)``, so
results do not depend on the worker count or on scheduling.  The verdict
uses the two-sided empirical quantile interval; the reported p-value is the
upper-tail mid-p value, which counts the observation itself as a tie.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .census import count_by_enumeration
from .model import MserParams, sample_arrays
from .network import MultisliceNetwork

STATISTICS = ("W1", "W2", "W3", "TOTAL")


class GofConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GofConfig:
    null_params: MserParams
    n: int
    num_replicates: int = 999
    master_seed: int = 0
    statistics: tuple[str, ...] = STATISTICS
    alpha: float = 0.05
    workers: int = 1

    def __post_init__(self):
        if self.num_replicates < 1:
            raise GofConfigError("num_replicates must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise GofConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        unknown = set(self.statistics) - set(STATISTICS)
        if unknown or not self.statistics:
            raise GofConfigError(f"statistics must be a non-empty subset of {STATISTICS}")
        if self.master_seed < 0:
            raise GofConfigError("master_seed must be non-negative")


@dataclass(frozen=True)
class StatisticResult:
    name: str
    observed: int
    q_low: int
    q_high: int
    p_value: float
    reject: bool
    greater: int
    ties: int
    simulated: np.ndarray = field(repr=False, compare=False)

    def histogram(self) -> list[tuple[int, int]]:
        values, counts = np.unique(self.simulated, return_counts=True)
        return list(zip(values.tolist(), counts.tolist()))


@dataclass(frozen=True)
class GofResult:
    config: GofConfig
    results: dict[str, StatisticResult]

    def __getitem__(self, name: str) -> StatisticResult:
        return self.results[name]

    def histogram_rows(self) -> list[tuple[str, int, int]]:
        """Plot-ready ``(statistic, value, count)`` rows of the simulated counts."""
        return [(name, v, c) for name, r in self.results.items() for v, c in r.histogram()]


def mid_p_value(greater: int, ties: int, num_replicates: int) -> float:
    """Upper-tail Monte Carlo p-value with ties split evenly.

    ``greater`` simulated values exceed the observation and ``ties`` equal
    it; the observation joins the ties, giving
    ``(greater + (ties + 1) / 2) / (num_replicates + 1)``.
    """
    if greater < 0 or ties < 0 or greater + ties > num_replicates:
        raise ValueError(f"need 0 <= greater + ties <= N, got {greater} + {ties} > {num_replicates}")
    return (greater + (ties + 1) / 2) / (num_replicates + 1)


def _order_index(level: float, size: int) -> int:
    # guard against 0.975 * 1000 = 975.0000000000001
    return max(1, math.ceil(round(level * size, 9))) - 1


def empirical_quantiles(samples, alpha: float = 0.05) -> tuple[int, int]:
    """Order statistics at ranks ``ceil(alpha/2 N)`` and ``ceil((1 - alpha/2) N)``."""
    s = np.sort(np.asarray(samples))
    if s.size == 0:
        raise ValueError("empirical quantiles of an empty sample")
    lo = s[_order_index(alpha / 2, s.size)]
    hi = s[_order_index(1 - alpha / 2, s.size)]
    return lo.item(), hi.item()


def simulate_counts(params: MserParams, n: int, num_replicates: int, seed: int, workers: int = 1, kernel=None) -> np.ndarray:
    """``(num_replicates, 3)`` array of (W1, W2, W3) for independent MSER draws."""
    kernel = kernel or _kernels.census
    out = np.zeros((num_replicates, 3), dtype=np.int64)
    if n < 3:
        return out

    def run(rows: range) -> None:
        for r in rows:
            a = sample_arrays(params, n, seed, r)
            out[r] = kernel(a.adj, a.down, a.eu, a.ev, a.el)

    if workers <= 1:
        run(range(num_replicates))
    else:
        chunks = [range(k, num_replicates, workers) for k in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, chunks))
    return out


def _statistic(counts: np.ndarray, name: str) -> np.ndarray:
    if name == "TOTAL":
        return counts.sum(axis=-1)
    return counts[..., int(name[1]) - 1]


def evaluate(observed: np.ndarray, simulated: np.ndarray, cfg: GofConfig) -> dict[str, StatisticResult]:
    results = {}
    for name in cfg.statistics:
        obs = int(_statistic(observed, name))
        sims = np.sort(_statistic(simulated, name))
        lo, hi = empirical_quantiles(sims, cfg.alpha)
        greater = int(np.count_nonzero(sims > obs))
        ties = int(np.count_nonzero(sims == obs))
        sims.setflags(write=False)
        results[name] = StatisticResult(
            name=name,
            observed=obs,
            q_low=int(lo),
            q_high=int(hi),
            p_value=mid_p_value(greater, ties, sims.size),
            reject=not lo <= obs <= hi,
            greater=greater,
            ties=ties,
            simulated=sims,
        )
    return results


def run_gof(net: MultisliceNetwork, cfg: GofConfig) -> GofResult:
    if cfg.n != net.n:
        raise GofConfigError(f"config has n={cfg.n} but the network has n={net.n}")
    if cfg.null_params.L != net.L:
        raise GofConfigError(f"null parameters have {cfg.null_params.L} layers but the network has {net.L}")
    observed = np.array(count_by_enumeration(net).as_tuple(), dtype=np.int64)
    sims = simulate_counts(cfg.null_params, cfg.n, cfg.num_replicates, cfg.master_seed, cfg.workers)
    return GofResult(cfg, evaluate(observed, sims, cfg))
