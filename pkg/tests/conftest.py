from itertools import combinations

import numpy as np
import pytest
from hypothesis import strategies as st

from mser import _kernels
from mser.formats import load_dataset
from mser.network import build_network


@pytest.fixture(scope="session")
def florentine():
    return load_dataset("florentine")


@pytest.fixture(params=["numba", "numpy"])
def census_kernel(request):
    return _kernels.census_numba if request.param == "numba" else _kernels.census_numpy


@pytest.fixture(params=["numba", "numpy"])
def pair_cov_kernel(request):
    return _kernels.pair_cov_numba if request.param == "numba" else _kernels.pair_cov_numpy


@st.composite
def networks(draw, max_n=8, max_L=4, min_n=1):
    """Node-aligned networks with random densities and randomly thinned couplings."""
    n = draw(st.integers(min_n, max_n))
    L = draw(st.integers(1, max_L))
    pairs = list(combinations(range(n), 2))
    edges = []
    for i in range(L):
        dens = draw(st.sampled_from([0.0, 0.2, 0.5, 0.8, 1.0]))
        seed = draw(st.integers(0, 2**32 - 1))
        keep = np.random.default_rng(seed).random(len(pairs)) < dens
        edges += [(i, u, v) for (u, v), k in zip(pairs, keep) if k]
    q = draw(st.sampled_from([0.0, 0.3, 0.7, 1.0]))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    coupled = [(i, j, u) for i, j in combinations(range(L), 2) for u in range(n) if rng.random() < q]
    return build_network(n, L, edges, coupled)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    RESULTS = getattr(mod, "RESULTS", None)
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[k])
