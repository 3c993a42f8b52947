import numpy as np
import pytest

from vcnls.characteristic import solve_basis
from vcnls.coeffs import CoefficientSet, list_scenarios, load_scenario
from vcnls.riccati import RiccatiParameters, riccati_kernel, riccati_multiparameter
from vcnls.seeds import build_seed
from vcnls.transforms import (
    BalanceError,
    family_solution,
    lens_apply,
    lens_invert,
    closed_form_solution,
    plane_wave,
    solve_scenario,
)
from vcnls.validate import pde_residual


@pytest.mark.parametrize("name", list_scenarios())
def test_every_scenario_solves_its_equation(name):
    sc = load_scenario(name)
    sol, exact = solve_scenario(sc)
    lo, hi = exact.domain
    lo, hi = lo + 0.02 * (hi - lo), hi - 0.05 * (hi - lo)
    if exact.dimension == 1:
        grid = f"{lo}:{hi}:21,-6:6:121"
    else:
        grid = f"{max(lo, 0.3)}:{hi}:6,-3:3:31,-3:3:31"
    assert pde_residual(exact, grid=grid).max_abs < 1e-6


@pytest.mark.parametrize("name, scenario, params", [
    ("g1", "bending_bright", {}),
    ("g2", "bending_dark", {}),
    ("Periodic1", "sch1", {}),
    ("FastDecay", "sch1_fastdecay", {}),
    ("Peregrine1", "sch2", {}),
    ("Peregrine2", "sch2_perturbed", {}),
])
def test_pipeline_matches_reference_closed_forms(name, scenario, params):
    closed = closed_form_solution(name)
    _, exact = solve_scenario(load_scenario(scenario), params)
    lo, hi = closed.domain
    t = np.linspace(max(lo, 0.0) + 0.5, min(hi, exact.domain[1]) * 0.95, 9)[:, None]
    x = np.linspace(-5, 5, 41)[None, :]
    assert np.max(np.abs(exact.psi(t, x) - closed.psi(t, x))) < 1e-8


def test_lens_round_trip():
    _, exact = solve_scenario(load_scenario("bending_bright"))
    t = np.linspace(0.1, 2.9, 20)[:, None]
    xi = np.linspace(-5, 5, 51)[None, :]
    back = lens_invert(exact, t, xi)
    assert np.max(np.abs(back - exact.seed.u(exact.phase.gamma(t), xi))) < 1e-12


def test_balance_is_checked():
    c = CoefficientSet(a=0.5, h=-3.0)
    k = riccati_kernel(solve_basis(c, 1.0))
    sol = riccati_multiparameter(k, RiccatiParameters())
    with pytest.raises(BalanceError):
        lens_apply(sol, build_seed("bright", {"v": 1.0}), c)
    with pytest.raises(BalanceError):
        lens_apply(sol, build_seed("dark", {"A": 1.0}), c)


def test_plane_wave_any_nonlinearity():
    c = CoefficientSet.from_strings({"a": "0.5", "b": "0.1", "h": "1 + sin(t)"})
    k = riccati_kernel(solve_basis(c, 2.0))
    sol = riccati_multiparameter(k, RiccatiParameters(alpha0=0.2, delta0=0.3))
    ex = plane_wave(sol, c, y=0.7)
    assert pde_residual(ex, grid="0.1:1.9:11,-4:4:41").max_abs < 1e-7


def test_family_is_bright_soliton_along_y():
    _, ex = family_solution({"h0": -2.0, "beta0": 1.0, "y": 0.5})
    t = np.linspace(0, 6, 13)[:, None]
    x = np.linspace(-5, 5, 41)[None, :]
    assert np.allclose(np.abs(ex.psi(t, x)) ** 2, 1 / np.cosh(x - 0.5 * t) ** 2, atol=1e-12)


@pytest.mark.parametrize("params", [
    {"h0": -2.0, "beta0": 2 / 3, "delta0": 1.0},
    {"h0": 2.0, "beta0": 2 / 3, "delta0": 1.0, "eps0": 0.3, "y": -0.4},
    {"h0": -1.0, "mu0": 1.5, "alpha0": 0.3, "beta0": 1.2, "gamma0": 0.1, "kappa0": 0.2},
])
def test_family_residual(params):
    coeffs, ex = family_solution(params)
    assert pde_residual(ex, grid="0.1:6:21,-6:6:121").max_abs < 1e-7


def test_predicted_blowup_on_scenario():
    _, ex = solve_scenario(load_scenario("example1"))
    assert ex.predicted_blowup == pytest.approx(2.0, abs=1e-12)
    assert ex.domain[1] < 2.0


def test_overrides_and_unknown_closed_form():
    _, ex = solve_scenario(load_scenario("bending_dark"), {"A": 1.5, "eps0": -1.0})
    assert ex.seed.params["A"] == 1.5
    with pytest.raises(ValueError):
        closed_form_solution("nope")
