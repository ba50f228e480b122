import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mser import _kernels
from mser.gof import (
    STATISTICS,
    GofConfig,
    GofConfigError,
    empirical_quantiles,
    evaluate,
    mid_p_value,
    run_gof,
    simulate_counts,
)
from mser.model import MserParams, fit_mle
from mser.network import build_network

FLORENTINE = MserParams((35 / 240, 35 / 240))


@pytest.mark.parametrize(
    "greater, ties, reps, expected",
    [
        (40, 37, 999, 0.059),  # 40 above, 37 ties, the observation breaks the tie
        (0, 0, 999, 0.0005),
        (999, 0, 999, 0.9995),
        (0, 999, 999, 0.5),
        (168, 13, 999, 0.175),
    ],
)
def test_mid_p_value(greater, ties, reps, expected):
    assert mid_p_value(greater, ties, reps) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("args", [(-1, 0, 10), (0, -1, 10), (6, 5, 10)])
def test_mid_p_value_domain(args):
    with pytest.raises(ValueError):
        mid_p_value(*args)


@pytest.mark.parametrize(
    "samples, alpha, expected",
    [
        (np.arange(1, 1000), 0.05, (25, 975)),
        (np.arange(1, 1001), 0.05, (25, 975)),
        (np.arange(1, 41), 0.05, (1, 39)),
        (np.arange(1, 11), 0.2, (1, 9)),
        (np.array([7]), 0.05, (7, 7)),
        (np.array([3, 1, 2]), 0.5, (1, 3)),
    ],
)
def test_empirical_quantiles(samples, alpha, expected):
    assert empirical_quantiles(samples, alpha) == expected


def test_empirical_quantiles_of_nothing():
    with pytest.raises(ValueError):
        empirical_quantiles([], 0.05)


@given(st.lists(st.integers(0, 50), min_size=1, max_size=300), st.floats(0.001, 0.999))
@settings(max_examples=100, deadline=None)
def test_quantile_interval_covers_the_central_mass(samples, alpha):
    lo, hi = empirical_quantiles(samples, alpha)
    s = np.asarray(samples)
    assert lo <= hi
    assert np.mean(s <= hi) >= 1 - alpha / 2 - 1e-9
    assert np.mean(s >= lo) >= 1 - alpha / 2 - 1e-9


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(num_replicates=0),
        dict(alpha=0.0),
        dict(alpha=1.0),
        dict(statistics=()),
        dict(statistics=("W4",)),
        dict(master_seed=-1),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(GofConfigError):
        GofConfig(FLORENTINE, 16, **kwargs)


def test_config_must_fit_the_network(florentine):
    with pytest.raises(GofConfigError, match="n=15"):
        run_gof(florentine, GofConfig(FLORENTINE, 15))
    with pytest.raises(GofConfigError, match="layers"):
        run_gof(florentine, GofConfig(MserParams((0.1,) * 3), 16))


def test_simulation_is_reproducible_and_worker_independent():
    params = MserParams((0.3, 0.2, 0.4), 0.8)
    a = simulate_counts(params, 12, 200, seed=9)
    b = simulate_counts(params, 12, 200, seed=9, workers=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, simulate_counts(params, 12, 200, seed=10))


def test_simulation_kernels_agree():
    params = MserParams((0.3, 0.2, 0.4), 0.8)
    a = simulate_counts(params, 12, 100, seed=1, kernel=_kernels.census_numba)
    b = simulate_counts(params, 12, 100, seed=1, kernel=_kernels.census_numpy)
    assert np.array_equal(a, b)


def test_too_few_nodes_simulate_zero():
    assert not simulate_counts(MserParams((0.5, 0.5)), 2, 10, seed=0).any()


def test_florentine_seed_7(florentine):
    res = run_gof(florentine, GofConfig(fit_mle(florentine, pooled=True), 16, 999, master_seed=7))
    w1 = res["W1"]
    assert (w1.observed, w1.q_low, w1.q_high, w1.greater, w1.ties) == (8, 0, 9, 40, 28)
    assert w1.p_value == pytest.approx((40 + 29 / 2) / 1000)
    assert not any(r.reject for r in res.results.values())
    assert res["TOTAL"].observed == 23
    assert list(res.results) == list(STATISTICS)
    assert len(w1.simulated) == 999
    assert not w1.simulated.flags.writeable


def test_florentine_is_not_rejected_across_seeds(florentine):
    params = fit_mle(florentine, pooled=True)
    for seed in range(5):
        res = run_gof(florentine, GofConfig(params, 16, 999, master_seed=seed))
        assert not any(r.reject for r in res.results.values())
        assert abs(res["W1"].q_high - 9) <= 1 and res["W1"].q_low == 0


def test_planted_structure_is_rejected():
    # a clique on top of a sparse layer has far more triangles than the fit allows
    clique = [(0, u, v) for u in range(8) for v in range(u + 1, 8)]
    net = build_network(30, 2, clique + [(1, u, u + 1) for u in range(29)])
    res = run_gof(net, GofConfig(fit_mle(net, pooled=False), 30, 199, master_seed=0))
    assert res["W1"].reject and res["W1"].p_value == pytest.approx(0.5 / 200)


def test_evaluate_and_histogram():
    sims = np.array([[0, 1, 0], [1, 1, 0], [2, 3, 0], [1, 0, 0]])
    cfg = GofConfig(MserParams((0.5, 0.5)), 5, num_replicates=4, alpha=0.5, statistics=("W1", "TOTAL"))
    res = evaluate(np.array([1, 1, 0]), sims, cfg)
    assert res["W1"].greater == 1 and res["W1"].ties == 2
    assert res["W1"].p_value == pytest.approx((1 + 1.5) / 5)
    assert res["TOTAL"].observed == 2
    assert res["TOTAL"].histogram() == [(1, 2), (2, 1), (5, 1)]
