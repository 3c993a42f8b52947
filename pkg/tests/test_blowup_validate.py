import json

import numpy as np
import pytest

from vcnls.blowup import amplitude_envelope, inverse_gamma0, lens_envelope, predict_blowup
from vcnls.characteristic import solve_basis
from vcnls.coeffs import CoefficientSet, load_scenario
from vcnls.riccati import RiccatiParameters, riccati_kernel, riccati_multiparameter
from vcnls.transforms import ExactSolution, family_solution, solve_scenario
from vcnls.validate import GridError, mass_law_check, parse_grid, pde_residual, system_residual


def example1(alpha0, t_max=2.5):
    sc = load_scenario("example1")
    k = riccati_kernel(solve_basis(sc.coefficients, t_max))
    return riccati_multiparameter(k, RiccatiParameters(mu0=0.5, alpha0=alpha0))


@pytest.mark.parametrize("alpha0", [-0.25, -0.4, -1.0, -3.0])
def test_blowup_time_formula(alpha0):
    rep = predict_blowup(example1(alpha0))
    assert rep.t_star == pytest.approx(-1 / (2 * alpha0), abs=1e-12)
    assert rep.method == "root_of_mu"
    assert rep.bracket[0] <= rep.t_star <= rep.bracket[1]
    assert json.loads(rep.to_json())["t_star"] == rep.t_star


def test_no_blowup_for_positive_alpha():
    assert predict_blowup(example1(0.3)) is None


def test_root_in_last_cell_is_inconclusive():
    rep = predict_blowup(example1(-0.25, t_max=2.0 + 1e-4))
    assert rep is not None and rep.method == "inconclusive"


def test_ermakov_never_blows_up():
    sol, _ = solve_scenario(load_scenario("family_bright"))
    assert predict_blowup(sol) is None


def test_inverse_gamma0():
    k = riccati_kernel(solve_basis(load_scenario("example1").coefficients, 2.5))
    assert inverse_gamma0(k, -0.25) == pytest.approx(2.0, abs=1e-10)


def test_envelopes_diverge_at_blowup():
    sol, ex = solve_scenario(load_scenario("example1_quintic"))
    T = ex.predicted_blowup
    times = T * np.array([0.5, 0.9, 0.99, 0.999])
    inf = lens_envelope(ex, np.inf, times) if ex.seed is not None else amplitude_envelope(ex, np.inf, times)
    assert np.all(np.diff(inf) > 0)
    assert inf[-1] > 10 * inf[0]


def test_amplitude_envelope_matches_lens_envelope():
    sol, ex = solve_scenario(load_scenario("bending_bright"))
    times = np.array([0.3, 1.0, 2.0])
    x = np.linspace(-300, 300, 120001)
    for p in (2.0, np.inf):
        assert np.allclose(amplitude_envelope(ex, p, times, x), lens_envelope(ex, p, times), rtol=1e-6)


def test_parse_grid():
    g = parse_grid("0:1:11,-2:2:21")
    t, x = g.axes()
    assert t.size == 11 and x[0] == -2
    assert parse_grid("0:1:3,-1:1:5,-1:1:5").ny == 5
    for bad in ("0:1:11", "1:0:11,-1:1:3", "0:1:1,-1:1:3", "a:b:c,-1:1:3"):
        with pytest.raises(ValueError):
            parse_grid(bad)


def test_residual_detects_wrong_solution():
    coeffs, ex = family_solution({"h0": -2.0, "beta0": 1.0})

    def wrong(t, x):
        return ex.psi(t, x) * (1 + 1e-3 * np.asarray(x))

    bad = ExactSolution(wrong, coeffs, ex.domain, 1, {})
    good = pde_residual(ex, grid="0.1:3:11,-5:5:51")
    worse = pde_residual(bad, grid="0.1:3:11,-5:5:51")
    assert good.passed and good.max_abs < 1e-8
    assert not worse.passed and worse.max_abs > 1e-4
    assert len(worse.worst_point) == 2


def test_grid_outside_domain():
    _, ex = solve_scenario(load_scenario("example1"))
    with pytest.raises(GridError):
        pde_residual(ex, grid="0:1:11,-1:1:11")
    with pytest.raises(GridError):
        pde_residual(ex, grid="0.5:2.5:11,-1:1:11")


def test_system_residual_flags_perturbation():
    from dataclasses import replace

    sol = example1(-0.25)
    assert system_residual(sol, t=np.linspace(0.1, 1.8, 100)).passed
    bent = replace(sol, delta=lambda t: sol.delta(t) + 1e-3 * np.asarray(t))
    assert not system_residual(bent, t=np.linspace(0.1, 1.8, 100)).passed


def test_mass_law_on_exact_solutions():
    _, ex = solve_scenario(load_scenario("sch1"))
    rep = mass_law_check(ex, times=np.linspace(0, 3, 7))
    assert rep.max_abs < 1e-8
    coeffs = CoefficientSet(a=0.5, h=-1.0)
    with pytest.raises(ValueError):
        mass_law_check(ex, coeffs, times=[0.0])
