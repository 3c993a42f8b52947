import numpy as np
import pytest
from scipy import special as sp

import oracles
from vcnls.special import dawson, dawson_prime, ellipk, jacobi_elliptic


@pytest.mark.parametrize("k", [0.0, 0.1, 0.5, 0.9, 0.999, 1 - 1e-10, 1.0])
def test_jacobi_matches_scipy(k):
    u = np.linspace(-6, 6, 301)
    sn, cn, dn = jacobi_elliptic(u, k)
    ref = sp.ellipj(u, k * k)
    assert np.allclose(sn, ref[0], atol=1e-12)
    assert np.allclose(cn, ref[1], atol=1e-12)
    assert np.allclose(dn, ref[2], atol=1e-12)


@pytest.mark.parametrize("u, k", [(0.3, 0.2), (1.7, 0.8), (-2.5, 0.95)])
def test_jacobi_matches_mpmath(u, k):
    got = [float(v) for v in jacobi_elliptic(u, k)]
    assert np.allclose(got, oracles.jacobi_mp(u, k * k), atol=1e-13)


def test_jacobi_identities():
    u = np.linspace(0, 10, 101)
    sn, cn, dn = jacobi_elliptic(u, 0.7)
    assert np.allclose(sn**2 + cn**2, 1, atol=1e-14)
    assert np.allclose(dn**2 + 0.49 * sn**2, 1, atol=1e-14)


def test_jacobi_rejects_bad_modulus():
    with pytest.raises(ValueError):
        jacobi_elliptic(0.5, 1.5)


@pytest.mark.parametrize("k", [0.1, 0.5, 0.99])
def test_ellipk(k):
    assert ellipk(k) == pytest.approx(oracles.ellipk_mp(k), rel=1e-13)


@pytest.mark.parametrize("t", [0.0, 0.25, 1.0, 2.0, 5.0, 15.0, 40.0, -1.3])
def test_dawson_against_quadrature(t):
    assert float(dawson(t)) == pytest.approx(oracles.dawson_quad(t), rel=1e-11, abs=1e-15)


def test_dawson_vectorized_and_derivative():
    t = np.linspace(-8, 8, 401)
    assert np.allclose(dawson(t), sp.dawsn(t), rtol=1e-11, atol=1e-15)
    assert np.allclose(dawson_prime(t), 1 - 2 * t * sp.dawsn(t), atol=1e-11)
