"""Closed-form triangle moments, covariance sums and Poisson total-variation bounds.

Sums over ordered tuples of distinct layers are written out term by term and
accumulated with :func:`math.fsum`; no symmetry shortcuts are taken so each
expression can be audited against its printed form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from math import comb, fsum
from typing import Callable

from .model import MserParams

# Reference figures printed alongside our own evaluations in reports.
PUBLISHED_LAZEGA_LAMBDA3 = 2319.0
PUBLISHED_FLORENTINE_UNIFORM_BOUND = 3345.0


@dataclass(frozen=True)
class MomentSummary:
    lambda1: float
    lambda2: float
    lambda3: float

    @property
    def lambda_total(self) -> float:
        return self.lambda1 + self.lambda2 + self.lambda3

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lambda1, self.lambda2, self.lambda3)


@dataclass(frozen=True)
class CovarianceBoundReport:
    """Covariance sums between triangle classes.

    ``r21`` pairs 2D indices with 1D indices, ``r23`` 2D with 3D, and so on.
    ``exact`` names the entries that are equalities rather than upper bounds.
    """

    r11: float
    r21: float
    r31: float
    r22: float
    r23: float
    r33: float
    exact: frozenset[str] = field(default=frozenset({"r11", "r21"}))

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in ("r11", "r21", "r31", "r22", "r23", "r33")}


@dataclass(frozen=True)
class TvBoundReport:
    indicator_term: float
    covariance_term: float
    uniform_bound: float | None = None

    @property
    def general_bound(self) -> float:
        return self.indicator_term + self.covariance_term

    @property
    def uninformative(self) -> bool:
        # total variation never exceeds 1
        return self.general_bound >= 1.0


def _tuples(L: int, m: int):
    return permutations(range(L), m)


def _tsum(L: int, m: int, term: Callable[..., float]) -> float:
    return fsum(term(*t) for t in _tuples(L, m))


def expected_counts(params: MserParams, n: int) -> MomentSummary:
    """Expected numbers of 1D, 2D and 3D triangles."""
    p, q, L = params.p, params.q, params.L
    c = comb(n, 3)
    lam1 = fsum(c * p[i] ** 3 for i in range(L))
    lam2 = 3 * fsum(c * p[i] * p[j] ** 2 * q**2 for i, j in _tuples(L, 2))
    lam3 = fsum(c * p[i] * p[j] * p[k] * q**3 for i, j, k in _tuples(L, 3))
    return MomentSummary(lam1, lam2, lam3)


def covariance_bounds(params: MserParams, n: int) -> CovarianceBoundReport:
    """Covariance sums ``R_{s,t}``; ``r11`` and ``r21`` exact, the rest upper bounds."""
    if n < 3:
        return CovarianceBoundReport(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    p, q, L = params.p, params.q, params.L
    c3 = comb(n, 3)

    r11 = c3 * 3 * (n - 3) * fsum(p[i] ** 5 * (1 - p[i]) for i in range(L))

    r21 = _tsum(L, 2, lambda i, j: 3 * c3 * q**2 * (
        (n - 2) * p[i] ** 3 * p[j] ** 2 * (1 - p[i])
        + 2 * (n - 3) * p[i] * p[j] ** 4 * (1 - p[j])
        + p[i] * p[j] ** 3 * (1 - p[j] ** 2)
    ))

    r31 = 0.5 * n**4 * _tsum(L, 3, lambda i, j, k: p[i] ** 3 * p[j] * p[k] * q**3)

    r22 = fsum([
        n**3 / 6 * _tsum(L, 2, lambda i, j: 4 * p[i] ** 2 * p[j] ** 2 * q**3
                         + p[i] ** 3 * p[j] ** 3 * q**2 * (1 - q**2)),
        4 * n**3 / 3 * _tsum(L, 3, lambda i, j, k: p[i] * p[j] ** 2 * p[k] * q**4),
        n**4 / 6 * _tsum(L, 2, lambda i, j: 8 * p[i] ** 3 * p[j] ** 2 * q**3
                         + 2 * p[i] ** 3 * p[j] ** 3 * q**3 * (1 - q)
                         + p[i] * p[j] ** 4 * q**2
                         + 4 * p[i] ** 2 * p[j] ** 4 * q**3 * (1 - q)
                         + p[i] ** 3 * p[j] ** 3 * q**2 * (1 - q**2)),
        n**4 / 6 * _tsum(L, 3, lambda i, j, k: 5 * p[i] * p[j] ** 2 * p[k] ** 2 * q**4
                         + 4 * p[i] * p[j] ** 3 * p[k] * q**4),
        2 * n**3 / 3 * _tsum(L, 2, lambda i, j: p[i] ** 2 * p[j] ** 4 * q**3 * (1 - q)
                             + p[i] ** 3 * p[j] ** 3 * q**3 * (1 - q)),
    ])

    r23 = fsum([
        3 * n**3 * _tsum(L, 3, lambda i, j, k: 2 * p[i] * p[j] ** 2 * p[k] * q**4
                         + p[i] ** 2 * p[j] ** 3 * p[k] * q**4 * (1 - q)),
        1.5 * n**3 * _tsum(L, 4, lambda i, j, k, l: p[i] * p[j] * p[k] * p[l] ** 2 * q**5),
        n**4 * _tsum(L, 3, lambda i, j, k: 2 * p[i] ** 2 * p[j] ** 2 * p[k] * q**5
                     + 2 * p[i] ** 2 * p[j] ** 3 * p[k] * q**4 * (1 - q)
                     + p[i] ** 3 * p[j] * p[k] * q**4),
        1.5 * n**4 * _tsum(L, 4, lambda i, j, k, l: p[i] * p[j] * p[k] ** 2 * p[l] * q**5),
        0.25 * n**5 * _tsum(L, 3, lambda i, j, k: 4 * p[i] * p[j] ** 2 * p[k] ** 3 * q**4 * (1 - q)),
    ])

    r33 = fsum([
        0.5 * n**3 * _tsum(L, 3, lambda i, j, k: p[i] * p[j] ** 2 * p[k] ** 2 * q**5),
        0.5 * n**3 * _tsum(L, 4, lambda i, j, k, l: 3 * p[i] * p[j] * p[k] * p[l] * q**5
                           + p[i] ** 2 * p[j] ** 2 * p[k] * p[l] * q**5 * (1 - q)),
        0.5 * n**4 * _tsum(L, 3, lambda i, j, k: 2 * p[i] ** 2 * p[j] ** 2 * p[k] ** 2 * q**5 * (1 - q)
                           + 2 * p[i] ** 2 * p[j] * p[k] ** 2 * q**4),
        0.5 * n**4 * _tsum(L, 4, lambda i, j, k, l: p[i] ** 2 * p[j] ** 2 * p[k] * p[l] * q**5 * (1 - q)
                           + p[i] * p[j] ** 2 * p[k] * p[l] * q**5),
        n**3 * _tsum(L, 5, lambda i, j, k, l, m: p[i] * p[j] * p[k] * p[l] * p[m] * q**6),
        0.5 * n**5 * _tsum(L, 3, lambda i, j, k: p[i] ** 2 * p[j] ** 2 * p[k] ** 2 * q**5 * (1 - q)),
        n**4 * _tsum(L, 5, lambda i, j, k, l, m: p[i] * p[j] * p[k] * p[l] * p[m] * q**6),
        0.25 * n**5 * _tsum(L, 4, lambda i, j, k, l: 2 * p[i] * p[j] ** 2 * p[k] ** 2 * p[l] * q**5 * (1 - q)),
    ])

    return CovarianceBoundReport(r11, r21, r31, r22, r23, r33)


def indicator_term(params: MserParams, n: int) -> float:
    """Sum of squared presence probabilities over all canonical indices."""
    p, q, L = params.p, params.q, params.L
    c = comb(n, 3)
    return fsum([
        fsum(c * p[i] ** 6 for i in range(L)),
        3 * fsum(c * p[i] ** 2 * p[j] ** 4 * q**4 for i, j in _tuples(L, 2)),
        fsum(c * p[i] ** 2 * p[j] ** 2 * p[k] ** 2 * q**6 for i, j, k in _tuples(L, 3)),
    ])


def tv_bound_uniform(p: float, n: int, L: int, q: float = 1.0) -> float:
    """Simplified bound for equal layer densities and full coupling."""
    if q != 1.0:
        raise ValueError("the uniform bound requires q = 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    return 21 * L**5 * n**4 * p**5 + 107 / 6 * L**4 * n**3 * p**4


def tv_bound_general(params: MserParams, n: int) -> TvBoundReport:
    r = covariance_bounds(params, n)
    cov = fsum([r.r11, r.r22, r.r33, 2 * r.r21, 2 * r.r31, 2 * r.r23])
    uniform = None
    if params.is_uniform and params.q == 1.0:
        uniform = tv_bound_uniform(params.p[0], n, params.L)
    return TvBoundReport(indicator_term(params, n), cov, uniform)
