import json
import math

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from mser.formats import reference_values
from mser.model import MserParams, sample
from mser.report import build_report, compare_to_reference, dumps, schema


@pytest.fixture(scope="module")
def validator():
    return jsonschema.Draft202012Validator(schema())


@given(st.floats(allow_nan=False, allow_infinity=False))
@settings(max_examples=300)
def test_floats_round_trip_exactly(x):
    text = dumps({"x": x})
    back = json.loads(text)["x"]
    assert back == x and isinstance(back, float)
    digits = text.split(": ")[1].strip().rstrip("}").strip()
    mantissa = digits.split("e")[0].lstrip("-").replace(".", "").strip("0")
    assert len(mantissa) <= 17


@pytest.mark.parametrize(
    "value, text",
    [(3.0, "3.0"), (0.1, "0.10000000000000001"), (1e22, "1e+22"), (-0.0, "-0.0"), (5, "5"), (True, "true")],
)
def test_number_layout(value, text):
    assert dumps([value]) == f"[{text}]\n"


@pytest.mark.parametrize("value", [math.inf, -math.inf, math.nan])
def test_non_finite_values_are_refused(value):
    with pytest.raises(ValueError):
        dumps({"x": value})


def test_unsupported_types():
    with pytest.raises(TypeError):
        dumps({"x": object()})


def test_nested_layout_is_stable():
    doc = {"b": [1, 2], "a": {"c": [], "d": {}}, "e": [{"f": None}]}
    assert json.loads(dumps(doc)) == doc
    assert list(json.loads(dumps(doc))) == ["b", "a", "e"]


def test_florentine_report(florentine, validator):
    rep = build_report(florentine, pooled=True, num_replicates=199, seed=7, reference=reference_values("florentine"))
    validator.validate(rep)
    assert rep["counts"]["methods_agree"]
    assert rep["counts"]["trace"] == rep["counts"]["enumeration"] == {"W1": 8, "W2": 15, "W3": 0, "TOTAL": 23}
    assert rep["gamma_sizes"] == [1120, 3360, 0]
    assert rep["tv_bound"]["uninformative"]
    assert len(rep["gof"]["statistics"]["W1"]["simulated"]) == 199
    flagged = {d["quantity"] for d in rep["discrepancies"] if d["flagged"]}
    assert flagged == {"tv_bound.uniform_bound"}
    text = dumps(rep)
    assert json.loads(text) == json.loads(dumps(json.loads(text)))
    assert dumps(json.loads(text)) == text


@pytest.mark.parametrize("seed", range(4))
def test_random_reports_validate(seed, validator):
    params = MserParams((0.3, 0.5, 0.2), 0.6)
    net = sample(params, 9, seed)
    rep = build_report(net, pooled=False, num_replicates=50, seed=seed)
    validator.validate(json.loads(dumps(rep)))
    assert rep["discrepancies"] == [] and "reference" not in rep


def test_report_is_deterministic(florentine):
    a = dumps(build_report(florentine, pooled=True, num_replicates=99, seed=3))
    b = dumps(build_report(florentine, pooled=True, num_replicates=99, seed=3, workers=3))
    assert a == b


def test_schema_rejects_tampering(florentine, validator):
    rep = json.loads(dumps(build_report(florentine, pooled=True, num_replicates=20, seed=0)))
    rep["counts"]["trace"]["W1"] = -1
    with pytest.raises(jsonschema.ValidationError):
        validator.validate(rep)


def test_compare_to_reference():
    ref = {"counts": {"TOTAL": 8160}, "moments": {"lambda3": 2319, "lambda1": 3033}, "relative_tolerance": 0.005}
    rows = compare_to_reference(ref, {"counts.TOTAL": 42473, "moments.lambda3": 4641.46, "moments.lambda1": 3034.7})
    flags = {r["quantity"]: r["flagged"] for r in rows}
    assert flags == {"counts.TOTAL": True, "moments.lambda3": True, "moments.lambda1": False}
    zero = compare_to_reference({"counts": {"W3": 0}}, {"counts.W3": 1})
    assert zero[0]["flagged"] and zero[0]["relative_gap"] is None
