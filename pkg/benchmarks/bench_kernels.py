"""Compare the numba kernels with their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 20]

Both backends are imported in one process; the env flag only changes which
one the library picks by default.  Results are checked for equality before
timing.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from mser import _kernels
from mser.model import MserParams, index_probability, sample_arrays
from mser.oracle import edge_probabilities, index_table

CENSUS_CASES = [
    ("Florentine-like", 16, (35 / 240, 35 / 240), 1.0),
    ("Lazega-like", 71, (0.2885, 0.2921, 0.1605), 1.0),
    ("sparse n=200", 200, (1 / 200, 1 / 200), 1.0),
    ("sparse n=1000, L=4", 1000, (3 / 1000,) * 4, 0.5),
]
ORACLE_CASES = [(5, (0.3, 0.6, 0.4), 0.7), (7, (0.3, 0.6, 0.4), 0.7)]


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_census(repeat: int) -> None:
    print(f"{'census case':<22}{'edges':>8}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, n, p, q in CENSUS_CASES:
        a = sample_arrays(MserParams(p, q), n, seed=0)
        args = (a.adj, a.down, a.eu, a.ev, a.el)
        assert np.array_equal(_kernels.census_numba(*args), _kernels.census_numpy(*args))
        tn = best_of(lambda: _kernels.census_numba(*args), repeat)
        tp = best_of(lambda: _kernels.census_numpy(*args), repeat)
        print(f"{name:<22}{len(a.eu):>8}{tn * 1e3:>12.3f}{tp * 1e3:>12.3f}{tp / tn:>10.1f}")


def bench_oracle(repeat: int) -> None:
    print(f"\n{'oracle case':<22}{'indices':>8}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for n, p, q in ORACLE_CASES:
        params = MserParams(p, q)
        indices, edges, nedges, kind, _ = index_table(n, params.L)
        pi = np.array([index_probability(params, idx) for idx in indices])
        prob = edge_probabilities(params, n)
        args = (edges, nedges, kind, pi, prob)
        assert np.allclose(_kernels.pair_cov_numba(*args), _kernels.pair_cov_numpy(*args), rtol=1e-10)
        tn = best_of(lambda: _kernels.pair_cov_numba(*args), max(1, repeat // 4))
        tp = best_of(lambda: _kernels.pair_cov_numpy(*args), max(1, repeat // 4))
        print(f"{f'n={n}, L={params.L}':<22}{len(indices):>8}{tn * 1e3:>12.3f}{tp * 1e3:>12.3f}{tp / tn:>10.1f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    print(f"default backend: {_kernels.backend_name()}\n")
    bench_census(args.repeat)
    bench_oracle(args.repeat)


if __name__ == "__main__":
    main()
