import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qkgsec.io import CURVE_HEADER, dumps, format_float, rows_to_csv
from qkgsec.profile import SpikeUniform, analyze


@pytest.mark.parametrize(
    "x, s",
    [(1.0, "1.0"), (0.1, "0.10000000000000001"), (1e300, "1.0000000000000001e+300"), (-3.0, "-3.0")],
)
def test_format_float(x, s):
    assert format_float(x) == s


@pytest.mark.parametrize("x", [math.inf, -math.inf, math.nan])
def test_non_finite_is_null(x):
    assert format_float(x) == "null"
    assert json.loads(dumps({"v": x})) == {"v": None}


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(x):
    assert json.loads(dumps([x]))[0] == x


def test_dumps_is_valid_json_and_ordered():
    obj = {"b": np.float64(0.5), "a": [np.int64(1), 2.0], "c": {"z": True, "y": None}, "d": np.array([1.5, 2.5])}
    text = dumps(obj)
    assert list(json.loads(text)) == ["b", "a", "c", "d"]
    assert json.loads(text) == {"b": 0.5, "a": [1, 2.0], "c": {"z": True, "y": None}, "d": [1.5, 2.5]}


def test_report_fixed_point():
    report = analyze(SpikeUniform(12, 0.3))
    once = dumps(report)
    assert dumps(json.loads(once)) == once


def test_unserializable():
    with pytest.raises(TypeError):
        dumps(object())


def test_csv():
    rows = [{"eta": 0.0, "trace_distance": 0.0, "eq3_prediction": 0.0, "ratio": None},
            {"eta": 0.5, "trace_distance": 0.5, "eq3_prediction": 1.0, "ratio": 0.5}]
    text = rows_to_csv(rows)
    assert text.splitlines() == [",".join(CURVE_HEADER), "0.0,0.0,0.0,nan", "0.5,0.5,1.0,0.5"]
