import json

import numpy as np
import pytest

from vcnls.coeffs import CoefficientSet, ScenarioError, list_scenarios, load_scenario
from vcnls.expr import ExpressionError, parse_time_expression


@pytest.mark.parametrize("src, fn", [
    ("1 + 2*t", lambda t: 1 + 2 * t),
    ("sin(t)^2 - cos(t)", lambda t: np.sin(t) ** 2 - np.cos(t)),
    ("-3*exp(3 - 3*cos(t))", lambda t: -3 * np.exp(3 - 3 * np.cos(t))),
    ("t^2 - 0.5", lambda t: t * t - 0.5),
    ("tanh(t) - t", lambda t: np.tanh(t) - t),
    ("cosh(t)^2", lambda t: np.cosh(t) ** 2),
    ("sqrt(1 + t^2)", lambda t: np.sqrt(1 + t * t)),
])
def test_parse_and_derivative(src, fn):
    f = parse_time_expression(src)
    t = np.linspace(0.1, 3, 50)
    assert np.allclose(f(t), fn(t), rtol=1e-14, atol=1e-14)
    h = 1e-5
    fd = (fn(t + h) - fn(t - h)) / (2 * h)
    assert np.allclose(f.derivative()(t), fd, rtol=1e-7, atol=1e-7)


def test_second_derivative():
    f = parse_time_expression("t^3 + sin(2*t)")
    t = np.linspace(0, 2, 11)
    assert np.allclose(f.derivative(2)(t), 6 * t - 4 * np.sin(2 * t), atol=1e-13)


@pytest.mark.parametrize("bad", ["1 +", "sin(", "foo(t)", "t**", "2 $ t", "sin(t, t)"])
def test_parse_errors_have_offsets(bad):
    with pytest.raises(ExpressionError) as info:
        parse_time_expression(bad)
    assert 0 <= info.value.offset <= len(bad)


def test_zero_and_constant_flags():
    assert parse_time_expression("0").is_zero
    assert parse_time_expression("2*3").is_constant
    assert not parse_time_expression("t").is_constant


def test_catalog_loads_every_scenario():
    names = list_scenarios()
    assert {"example1", "example2_gp", "example3_toy", "sch1", "sch2", "bending_bright", "bending_dark"} <= set(names)
    for name in names:
        sc = load_scenario(name)
        assert sc.name == name
        assert sc.time_domain[1] > sc.time_domain[0]


def test_unknown_scenario_and_coefficient():
    with pytest.raises(ScenarioError):
        load_scenario("no_such_scenario")
    with pytest.raises(ScenarioError):
        CoefficientSet.from_strings({"a": "1", "q": "t"})
    with pytest.raises(ScenarioError):
        CoefficientSet.from_strings({"b": "1"})


def test_scenario_from_file(tmp_path):
    data = {"name": "mine", "dimension": 1, "coefficients": {"a": "0.5", "h": "-1"},
            "seed": {"kind": "bright", "params": {}}, "phase": {"method": "riccati", "params": {}},
            "time_domain": [0, 1]}
    p = tmp_path / "mine.json"
    p.write_text(json.dumps(data))
    sc = load_scenario(p)
    assert sc.coefficients.h(0.3) == -1.0


def test_coefficient_validation():
    with pytest.raises(ValueError):
        CoefficientSet(a=1.0, l0=2)
    with pytest.raises(ValueError):
        CoefficientSet(a=1.0, dimension=3)
    c = CoefficientSet(a=1.0, b="t")
    assert c.is_zero("c") and not c.is_zero("b")
    with pytest.raises(ScenarioError):
        CoefficientSet(a="t").check_dispersion([0.0, 1.0])
