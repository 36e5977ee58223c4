import json
import math
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from spherarea.reporting import fmt5, fmt17, pattern_str, to_csv, to_json


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt17_round_trips(x):
    assert float(fmt17(x)) == x


def test_fmt17_marks_integers_as_reals():
    assert fmt17(2.0) == "2.0"
    assert fmt17(1e-5) == "1.0000000000000001e-05"


def test_fmt5_keeps_trailing_zeros():
    assert fmt5(12.30959) == "12.310"
    assert fmt5(1.6472697e-5) == "1.6473e-05"


def test_to_json_shape():
    text = to_json({"p": (3, 7, 29), "phi": Fraction(1, 858), "k": 0.1, "ok": True, "rows": [{"a": 1}]})
    data = json.loads(text)
    assert data == {"p": [3, 7, 29], "phi": "1/858", "k": 0.1, "ok": True, "rows": [{"a": 1}]}
    assert '"p": [3, 7, 29]' in text


def test_to_json_rejects_non_finite():
    try:
        to_json({"x": math.nan})
    except ValueError:
        pass
    else:
        raise AssertionError("NaN was serialized")


def test_to_csv_cells():
    text = to_csv(["p", "ok", "x"], [[(3, 4, 5), True, 0.5]])
    assert text == "p,ok,x\n\"3,4,5\",true,0.5\n"
    assert pattern_str((3, 3, 3)) == "3,3,3"
