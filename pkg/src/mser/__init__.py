"""Triangle censuses, MSER null models and Poisson bounds for multislice networks."""
from importlib.metadata import PackageNotFoundError, version

from .census import (
    CensusConsistencyError,
    TriangleCounts,
    TriangleIndex,
    TriangleType,
    census,
    count_by_enumeration,
    count_by_trace,
    enumerate_present,
    gamma_sizes,
    iter_gamma,
)
from .formats import DatasetUnavailable, ParseError, dumps_network, load_dataset, load_network, parse_network
from .gof import GofConfig, GofResult, StatisticResult, mid_p_value, run_gof, simulate_counts
from .model import MserParams, ParamsError, as_params, fit_mle, sample
from .moments import (
    CovarianceBoundReport,
    MomentSummary,
    TvBoundReport,
    covariance_bounds,
    expected_counts,
    tv_bound_general,
    tv_bound_uniform,
)
from .network import FULL, MultisliceNetwork, NetworkError, build_network, supra_matrices
from .oracle import exact_covariance_oracle

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover - running from a source tree
    __version__ = "0.0.0"

__all__ = [
    "FULL",
    "CensusConsistencyError",
    "CovarianceBoundReport",
    "DatasetUnavailable",
    "GofConfig",
    "GofResult",
    "MomentSummary",
    "MserParams",
    "MultisliceNetwork",
    "NetworkError",
    "ParamsError",
    "ParseError",
    "StatisticResult",
    "TriangleCounts",
    "TriangleIndex",
    "TriangleType",
    "TvBoundReport",
    "as_params",
    "build_network",
    "census",
    "count_by_enumeration",
    "count_by_trace",
    "covariance_bounds",
    "dumps_network",
    "enumerate_present",
    "exact_covariance_oracle",
    "expected_counts",
    "fit_mle",
    "gamma_sizes",
    "iter_gamma",
    "load_dataset",
    "load_network",
    "mid_p_value",
    "parse_network",
    "run_gof",
    "sample",
    "simulate_counts",
    "supra_matrices",
    "tv_bound_general",
    "tv_bound_uniform",
]
