import numpy as np
import pytest

import oracles
from vcnls.seeds import ProfileError, build_seed, elliptic_profile, ground_state_radial


def seed_residual(seed, tau, xi, h=1e-3):
    """i u_tau - l0 (u_xixi - lam |u|^(2s) u) by central differences."""
    u = seed.u
    ut = (u(tau - 2 * h, xi) - 8 * u(tau - h, xi) + 8 * u(tau + h, xi) - u(tau + 2 * h, xi)) / (12 * h)
    uxx = (-u(tau, xi - 2 * h) + 16 * u(tau, xi - h) - 30 * u(tau, xi) + 16 * u(tau, xi + h) - u(tau, xi + 2 * h)) / (12 * h * h)
    v = u(tau, xi)
    return np.max(np.abs(1j * ut - seed.l0 * (uxx - seed.lam * np.abs(v) ** (2 * seed.s) * v)))


@pytest.mark.parametrize("kind, params", [
    ("bright", {"v": 1.0}),
    ("bright", {"v": 2.5, "l0": -1, "lam": -1.0}),
    ("dark", {"A": 2.0}),
    ("dark", {"A": 0.7, "l0": 1}),
    ("sech_cubic", {"v": -2.0}),
    ("peregrine", {"A": 0.5}),
    ("peregrine", {"A": 0.5, "scale": 0.5}),
    ("ground_state_1d", {"s": 1.0}),
    ("ground_state_1d", {"s": 2.0, "l0": -1}),
    ("cn_wave", {"xi0": -0.5, "h0": -2.0, "C0": 0.3}),
    ("sn_wave", {"xi0": 2.0, "h0": 2.0, "C0": 0.5}),
])
def test_seed_solves_target(kind, params):
    seed = build_seed(kind, params)
    tau = np.linspace(0.1, 1.0, 7)[:, None]
    xi = np.linspace(-4, 4, 81)[None, :]
    assert seed_residual(seed, tau, xi) < 1e-6


def test_seed_parameter_errors():
    with pytest.raises(ValueError):
        build_seed("bright", {})
    with pytest.raises(ValueError):
        build_seed("bright", {"v": -1.0})
    with pytest.raises(ValueError):
        build_seed("no_such_kind", {})


@pytest.mark.parametrize("xi0, h0, C0, regime", [
    (-1.0, -2.0, 0.0, "cn"),
    (1.0, 2.0, 0.25, "dark"),
    (-0.5, -2.0, 0.3, "cn"),
    (2.0, 2.0, 0.5, "sn"),
])
def test_elliptic_profiles(xi0, h0, C0, regime):
    prof = elliptic_profile(xi0, h0, C0)
    assert prof.regime == regime
    z = np.linspace(-5, 5, 201)
    assert np.allclose(prof.first_integral(z), C0, atol=1e-9)
    h = 1e-3
    F = prof.F
    Fzz = (-F(z - 2 * h) + 16 * F(z - h) - 30 * F(z) + 16 * F(z + h) - F(z + 2 * h)) / (12 * h * h)
    assert np.max(np.abs(Fzz + xi0 * F(z) - h0 * F(z) ** 3)) < 1e-6


def test_townes_profile_against_oracle():
    Q = ground_state_radial()
    assert Q.info["Q0"] == pytest.approx(oracles.townes_q0(), abs=1e-9)
    r = np.linspace(0.05, 8, 400)
    h = 1e-3
    F = Q.F
    Qrr = (-F(r - 2 * h) + 16 * F(r - h) - 30 * F(r) + 16 * F(r + h) - F(r + 2 * h)) / (12 * h * h)
    Qr = (F(r - 2 * h) - 8 * F(r - h) + 8 * F(r + h) - F(r + 2 * h)) / (12 * h)
    assert np.max(np.abs(Qrr + Qr / r - F(r) + F(r) ** 3)) < 1e-7
    assert np.all(F(r) > 0)
    assert F(15.0) < 1e-5


def test_ground_state_1d_radial_matches_sech():
    Q = ground_state_radial(n=1)
    x = np.linspace(0, 6, 61)
    assert np.allclose(Q.F(x), np.sqrt(2) / np.cosh(x), atol=1e-7)


def test_radial_argument_errors():
    with pytest.raises(ValueError):
        ground_state_radial(n=3)
    with pytest.raises(ValueError):
        ground_state_radial(p=1.0)
