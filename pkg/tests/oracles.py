"""Independent reference values used by the tests.

Nothing here imports vcnls; each oracle uses mpmath, scipy or a direct
finite difference instead of the code path under test.
"""
import mpmath as mp
import numpy as np
from scipy.integrate import solve_ivp

mp.mp.dps = 30


def dawson_quad(t):
    """D(t) = exp(-t^2) int_0^t exp(z^2) dz by mpmath quadrature."""
    t = mp.mpf(t)
    return float(mp.exp(-t * t) * mp.quad(lambda z: mp.exp(z * z), [0, t]))


def jacobi_mp(u, m):
    """(sn, cn, dn) from mpmath with parameter m = k^2."""
    return tuple(float(mp.ellipfun(kind, u, m=m)) for kind in ("sn", "cn", "dn"))


def ellipk_mp(k):
    return float(mp.ellipk(k * k))


def townes_q0(tol=1e-12):
    """Q(0) of Q'' + Q'/r - Q + Q^3 = 0 by plain shooting with solve_ivp.

    Uses the series start Q(r) ~ q + q(1 - q^2) r^2/4 and classifies each
    shot by whether Q crosses zero (too large) or turns up (too small).
    """

    def shot(q):
        r0 = 1e-6
        y0 = [q + q * (1 - q * q) * r0 * r0 / 4, q * (1 - q * q) * r0 / 2]

        def rhs(r, y):
            return [y[1], -y[1] / r + y[0] - y[0] ** 3]

        def cross(r, y):
            return y[0]

        def turn(r, y):
            return y[1]

        cross.terminal = True
        turn.terminal = True
        turn.direction = 1
        sol = solve_ivp(rhs, (r0, 30.0), y0, rtol=1e-12, atol=1e-14, events=(cross, turn))
        if sol.t_events[0].size:
            return 1
        return -1

    lo, hi = 2.0, 2.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if shot(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def fd_time_derivative(fn, t, h=1e-4):
    """Fourth-order central difference of a scalar function of time."""
    t = np.asarray(t, dtype=float)
    return (fn(t - 2 * h) - 8 * fn(t - h) + 8 * fn(t + h) - fn(t + 2 * h)) / (12 * h)


def second_order_ode(tau, sigma, t_max, y0, ts):
    """Solve mu'' - tau(t) mu' + 4 sigma(t) mu = 0 with solve_ivp (LSODA)."""

    def rhs(t, y):
        return [y[1], tau(t) * y[1] - 4 * sigma(t) * y[0]]

    sol = solve_ivp(rhs, (0.0, t_max), y0, method="LSODA", rtol=1e-12, atol=1e-14, t_eval=ts)
    return sol.y[0]
