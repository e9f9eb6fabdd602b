import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from holderscan.errors import ParameterError
from holderscan.weights import WeightFunction, evaluate, validate


def test_examples():
    assert evaluate(validate("poly", 0.0), 0.3) == 1.0
    assert evaluate(validate("poly", 0.25), 0.0625) == pytest.approx(0.5, abs=1e-15)
    assert evaluate(validate("log", 1.0), 0.25) == pytest.approx(0.5 * math.log(4), abs=1e-12)
    assert evaluate(validate("log", 1.0), 0.25) == pytest.approx(0.693147, abs=1e-6)


@pytest.mark.parametrize("family,beta", [("poly", 0.5), ("log", 0.5), ("poly", -0.1), ("log", math.inf), ("cubic", 1)])
def test_out_of_range(family, beta):
    with pytest.raises(ParameterError):
        validate(family, beta)


def test_range_message_names_interval():
    with pytest.raises(ParameterError, match=r"\[0, 1/2\)"):
        validate("poly", 0.5)


def test_domain():
    w = validate("log", 1.0)
    for x in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValueError):
            w(x)


def test_parse_roundtrip():
    w = WeightFunction.parse("log:1.5")
    assert (w.family, w.beta) == ("log", 1.5)
    assert WeightFunction.parse(str(w)) == w
    with pytest.raises(ParameterError):
        WeightFunction.parse("poly")
    with pytest.raises(ParameterError):
        WeightFunction.parse("poly:abc")


@given(st.floats(0.0, 0.499))
def test_poly_monotone_positive(beta):
    x = np.linspace(0.001, 0.999, 400)
    v = validate("poly", beta)(x)
    assert np.all(v > 0)
    if beta > 1e-3:
        assert np.all(np.diff(v) > 0)


@given(st.floats(0.501, 5.0))
def test_log_monotone_positive(beta):
    w = validate("log", beta)
    x = np.linspace(1e-4, 0.5, 400)
    assert np.all(w(x) > 0)
    top = math.exp(-2 * beta)
    xs = np.linspace(1e-6, top, 400)
    assert np.all(np.diff(w(xs)) > 0)
