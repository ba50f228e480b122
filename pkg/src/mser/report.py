"""Machine-readable analysis reports.

Reports are plain JSON documents.  Floats are written with 17 significant
digits so that parsing a report recovers every value bit for bit, and no
clock or host information is embedded, so identical inputs give identical
bytes.
"""
from __future__ import annotations

import json
import math
from importlib import resources
from typing import Any

import numpy as np

from .census import CensusConsistencyError, count_by_enumeration, count_by_trace, gamma_sizes, TriangleCounts
from .formats import network_digest
from .gof import GofConfig, GofResult, run_gof
from .model import MserParams, fit_mle
from .moments import covariance_bounds, expected_counts, tv_bound_general
from .network import MultisliceNetwork, supra_matrices

SCHEMA_ID = "mser-report/1"
DEFAULT_RELATIVE_TOLERANCE = 0.005


def schema() -> dict:
    return json.loads((resources.files("mser") / "data" / "report.schema.json").read_text("utf-8"))


# --------------------------------------------------------------- encoding


def _float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be reported")
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with 17-significant-digit floats and stable layout."""

    def enc(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, (bool, np.bool_)):
            return "true" if o else "false"
        if o is None:
            return "null"
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return _float(float(o))
        if isinstance(o, str):
            return json.dumps(o, ensure_ascii=False)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {enc(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            seq = list(o.tolist() if isinstance(o, np.ndarray) else o)
            if not seq:
                return "[]"
            if not any(isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
                return "[" + ", ".join(enc(v, level + 1) for v in seq) + "]"
            return "[\n" + ",\n".join(pad + enc(v, level + 1) for v in seq) + "\n" + end + "]"
        raise TypeError(f"cannot encode {type(o).__name__}")

    return enc(obj, 0) + "\n"


# --------------------------------------------------------------- sections


def counts_dict(c: TriangleCounts) -> dict:
    return {"W1": c.w1, "W2": c.w2, "W3": c.w3, "TOTAL": c.total}


def params_dict(params: MserParams, pooled: bool | None = None) -> dict:
    out: dict[str, Any] = {"p": list(params.p), "q": params.q}
    if pooled is not None:
        out["pooled"] = pooled
    return out


def gof_dict(res: GofResult, full: bool = True) -> dict:
    cfg = res.config
    stats = {}
    for name, r in res.results.items():
        d: dict[str, Any] = {
            "observed": r.observed,
            "q_low": r.q_low,
            "q_high": r.q_high,
            "p_value": r.p_value,
            "reject": r.reject,
            "greater": r.greater,
            "ties": r.ties,
        }
        if full:
            d["simulated"] = r.simulated.tolist()
        else:
            d["histogram"] = [list(vc) for vc in r.histogram()]
        stats[name] = d
    return {
        "num_replicates": cfg.num_replicates,
        "master_seed": cfg.master_seed,
        "alpha": cfg.alpha,
        "null_params": params_dict(cfg.null_params),
        "statistics": stats,
    }


def bound_dict(params: MserParams, n: int) -> dict:
    tv = tv_bound_general(params, n)
    return {
        "indicator_term": tv.indicator_term,
        "covariance_term": tv.covariance_term,
        "general_bound": tv.general_bound,
        "uniform_bound": tv.uniform_bound,
        "uninformative": tv.uninformative,
    }


def compare_to_reference(reference: dict, computed: dict[str, float]) -> list[dict]:
    """Published-versus-computed rows; a row is flagged when the relative gap exceeds the tolerance."""
    tol = float(reference.get("relative_tolerance", DEFAULT_RELATIVE_TOLERANCE))
    out = []
    published = {}
    for section in ("counts", "moments"):
        for k, v in reference.get(section, {}).items():
            published[f"{section}.{k}"] = v
    if "tv_uniform_bound" in reference:
        published["tv_bound.uniform_bound"] = reference["tv_uniform_bound"]
    for key, pub in published.items():
        if key not in computed or computed[key] is None:
            continue
        val = float(computed[key])
        gap = (val - pub) / abs(pub) if pub else (0.0 if val == 0 else math.inf)
        out.append({
            "quantity": key,
            "published": float(pub),
            "computed": val,
            "relative_gap": gap if math.isfinite(gap) else None,
            "flagged": not abs(gap) <= tol,
        })
    return out


def build_report(
    net: MultisliceNetwork,
    *,
    pooled: bool,
    num_replicates: int = 999,
    seed: int = 0,
    alpha: float = 0.05,
    q: float = 1.0,
    params: MserParams | None = None,
    reference: dict | None = None,
    workers: int = 1,
) -> dict:
    """Full analysis of one network: censuses, fit, moments, bounds and the MC test."""
    by_trace = count_by_trace(supra_matrices(net))
    by_enum = count_by_enumeration(net)
    agree = by_trace == by_enum
    if params is None:
        params = fit_mle(net, pooled=pooled, q=q)
    mom = expected_counts(params, net.n)
    cov = covariance_bounds(params, net.n)
    tv = bound_dict(params, net.n)
    gof = run_gof(net, GofConfig(params, net.n, num_replicates, seed, alpha=alpha, workers=workers))

    report: dict[str, Any] = {
        "schema": SCHEMA_ID,
        "input": {
            "digest": network_digest(net),
            "n": net.n,
            "L": net.L,
            "edge_counts": list(net.edge_counts),
            "num_couplings": net.num_couplings,
            "fully_coupled": net.is_fully_coupled,
        },
        "params": params_dict(params, pooled),
        "counts": {
            "trace": counts_dict(by_trace),
            "enumeration": counts_dict(by_enum),
            "methods_agree": agree,
        },
        "gamma_sizes": list(gamma_sizes(net.n, net.L)),
        "moments": {
            "lambda1": mom.lambda1,
            "lambda2": mom.lambda2,
            "lambda3": mom.lambda3,
            "lambda_total": mom.lambda_total,
        },
        "covariance_bounds": {**cov.as_dict(), "exact": sorted(cov.exact)},
        "tv_bound": tv,
        "gof": gof_dict(gof, full=True),
        "discrepancies": [],
    }
    if reference:
        computed = {f"counts.{k}": v for k, v in counts_dict(by_enum).items()}
        computed.update({f"moments.{k}": v for k, v in report["moments"].items()})
        computed["tv_bound.uniform_bound"] = tv["uniform_bound"]
        report["reference"] = {"source": reference.get("source", "")}
        report["discrepancies"] = compare_to_reference(reference, computed)
    if not agree:
        raise CensusConsistencyError(
            f"trace census {by_trace.as_tuple()} != enumeration census {by_enum.as_tuple()}"
        )
    return report


def loads(text: str) -> dict:
    return json.loads(text)
