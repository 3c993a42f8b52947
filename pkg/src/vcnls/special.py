"""Special functions needed by the seed solutions.

Jacobi elliptic functions use the descending Landen (arithmetic-geometric
mean) scheme; the Dawson integral is the solution of ``D' = 1 - 2tD``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

__all__ = ["jacobi_elliptic", "ellipk", "dawson", "dawson_prime"]

_AGM_MAX = 40


def _agm_chain(k: float):
    a, b, c = 1.0, np.sqrt((1.0 - k) * (1.0 + k)), k
    chain = [(a, c)]
    for _ in range(_AGM_MAX):
        if abs(c) < 1e-16 * a:
            break
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        chain.append((a, c))
    return chain


def ellipk(k: float) -> float:
    """Complete elliptic integral of the first kind, modulus ``k`` (not ``m = k^2``)."""
    if not 0.0 <= k <= 1.0:
        raise ValueError("modulus k must lie in [0, 1]")
    if k == 1.0:
        return np.inf
    a = _agm_chain(k)[-1][0]
    return np.pi / (2.0 * a)


def jacobi_elliptic(u, k: float):
    """Return ``(sn, cn, dn)`` of argument ``u`` and modulus ``k`` in ``[0, 1]``."""
    if not 0.0 <= k <= 1.0:
        raise ValueError("modulus k must lie in [0, 1]")
    u = np.asarray(u, dtype=float)
    if k == 1.0:
        sech = 1.0 / np.cosh(u)
        return np.tanh(u), sech, sech.copy()
    if k == 0.0:
        return np.sin(u), np.cos(u), np.ones_like(u)
    chain = _agm_chain(k)
    n = len(chain) - 1
    phi = (2.0**n) * chain[-1][0] * u
    for j in range(n, 0, -1):
        a_j, c_j = chain[j]
        phi = 0.5 * (phi + np.arcsin(np.clip(c_j / a_j * np.sin(phi), -1.0, 1.0)))
    sn, cn = np.sin(phi), np.cos(phi)
    dn = np.sqrt(1.0 - (k * sn) ** 2)
    return sn, cn, dn


_DAWSON_T = 20.0


@lru_cache(maxsize=1)
def _dawson_dense():
    res = solve_ivp(lambda t, y: 1.0 - 2.0 * t * y, (0.0, _DAWSON_T), [0.0], method="DOP853",
                    rtol=3e-14, atol=1e-16, dense_output=True)
    return res.sol


def _dawson_asymptotic(t):
    # D(t) ~ 1/(2t) sum (2n-1)!! / (2 t^2)^n
    x = 1.0 / (2.0 * t * t)
    term = np.ones_like(t)
    total = np.ones_like(t)
    for n in range(1, 12):
        term = term * (2 * n - 1) * x
        total = total + term
    return total / (2.0 * t)


def dawson(t):
    """Dawson function ``D(t) = exp(-t^2) int_0^t exp(z^2) dz``."""
    t = np.asarray(t, dtype=float)
    a = np.abs(t)
    out = np.empty_like(a)
    inner = a <= _DAWSON_T
    if np.any(inner):
        out[inner] = _dawson_dense()(a[inner])[0]
    if np.any(~inner):
        out[~inner] = _dawson_asymptotic(a[~inner])
    return np.sign(t) * out


def dawson_prime(t):
    t = np.asarray(t, dtype=float)
    return 1.0 - 2.0 * t * dawson(t)
