import numpy as np
import pytest

import oracles
from vcnls.characteristic import characteristic_coefficients, solve_basis
from vcnls.coeffs import CoefficientSet, load_scenario


def test_harmonic_basis():
    B = solve_basis(CoefficientSet(a=0.5, b=0.5), 7.0)
    t = np.linspace(0, 7, 300)
    assert np.allclose(B.mu0(t), np.sin(t), atol=1e-9)
    assert np.allclose(B.mu1(t), np.cos(t), atol=1e-9)


def test_initial_conditions():
    c = CoefficientSet.from_strings({"a": "1 + 0.3*sin(t)", "b": "0.4", "c": "0.2*t", "d": "0.3*cos(t)"})
    B = solve_basis(c, 3.0)
    assert B.mu0(0.0) == pytest.approx(0.0, abs=1e-14)
    assert B.mu1(0.0) == pytest.approx(1.0)
    h = 1e-5
    assert (B.mu0(h) - B.mu0(-0.0)) / h == pytest.approx(2 * c.a(0.0), rel=1e-4)


def test_against_direct_integration():
    c = CoefficientSet.from_strings({"a": "1 + 0.3*sin(t)", "b": "0.4 + 0.1*cos(2*t)", "c": "0.2*t", "d": "0.3*cos(t)"})
    tau, sigma = characteristic_coefficients(c)
    ts = np.linspace(0, 4, 41)
    B = solve_basis(c, 4.0, tol=1e-12)
    ref0 = oracles.second_order_ode(tau, sigma, 4.0, [0.0, 2 * c.a(0.0)], ts)
    ref1 = oracles.second_order_ode(tau, sigma, 4.0, [1.0, 0.0], ts)
    assert np.allclose(B.mu0(ts), ref0, rtol=1e-8, atol=1e-9)
    assert np.allclose(B.mu1(ts), ref1, rtol=1e-8, atol=1e-9)


def test_tree_and_callable_forms_agree():
    c = CoefficientSet.from_strings({"a": "1 + 0.3*sin(t)", "b": "0.4", "c": "0.2*t", "d": "0.3*cos(t)"})
    tau, sigma = characteristic_coefficients(c)
    cc = CoefficientSet(a=lambda t: 1 + 0.3 * np.sin(t), b=0.4, c=lambda t: 0.2 * t, d=lambda t: 0.3 * np.cos(t))
    tau2, sigma2 = characteristic_coefficients(cc)
    t = np.linspace(0.1, 3, 20)
    assert np.allclose(tau(t), tau2(t), atol=1e-8)
    assert np.allclose(sigma(t), sigma2(t), atol=1e-8)


def test_gp_and_example1_basis():
    B = solve_basis(load_scenario("example2_gp").coefficients, 1.5)
    t = np.linspace(0, 1.5, 50)
    assert np.allclose(B.mu0(t), 2 * np.sin(t), atol=1e-9)
    B = solve_basis(load_scenario("example1").coefficients, 2.5)
    assert np.allclose(B.mu0(t), t, atol=1e-12)
