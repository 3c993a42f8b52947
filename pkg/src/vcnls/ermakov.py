"""Ermakov system: the Riccati system with ``c0 a beta^4`` feedback terms.

    alpha' + b + 2c alpha + 4a alpha^2 = c0 a beta^4
    beta'  + (c + 4a alpha) beta = 0
    gamma' + a beta^2 = 0
    delta' + (c + 4a alpha) delta = f + 2 alpha g + 2 c0 a beta^3 eps
    eps'   = (g - 2a delta) beta
    kappa' = g delta - a delta^2 + c0 a beta^2 eps^2

The solution below uses ``R = sqrt(m^2 + c0 beta(0)^4 mu0^2)`` with ``m`` from
the Riccati module, so it is regular through zeros of ``mu0`` and, for
``c0 > 0``, never blows up.
"""
from __future__ import annotations

import numpy as np

from .coeffs import CoefficientSet
from .riccati import PhaseSolution, RiccatiKernel, RiccatiParameters, _g_phase

__all__ = ["ermakov_multiparameter", "balanced_coefficients", "ermakov_residual_terms"]


def _unwrapped_angle(y_fn, x_fn, t0, t1, n=4097):
    """Continuous branch of ``atan2(y, x)`` with ``angle(t0) = atan2(y(t0), x(t0))``."""
    while True:
        grid = np.linspace(t0, t1, n)
        raw = np.arctan2(y_fn(grid), x_fn(grid))
        if np.max(np.abs(np.diff(raw) + np.pi) % (2 * np.pi) - np.pi, initial=0.0) < np.pi / 4 or n > 2**20:
            break
        n = 2 * n - 1
    ref = np.unwrap(raw)

    def angle(t):
        t = np.asarray(t, dtype=float)
        principal = np.arctan2(y_fn(t), x_fn(t))
        guess = np.interp(t, grid, ref)
        return principal + 2 * np.pi * np.round((guess - principal) / (2 * np.pi))

    return angle


def ermakov_multiparameter(
    kernel: RiccatiKernel,
    params: RiccatiParameters,
    c0: float = 1.0,
    xi0: float = 0.0,
    h0: float = 0.0,
) -> PhaseSolution:
    """Multiparameter solution of the Ermakov system.

    With ``r = 2 alpha(0) + d(0)/a(0)``, ``m = r mu0 + mu1``, ``Q = delta(0) + L``,
    ``b0 = beta(0)``, ``e0 = eps(0)`` and ``R^2 = m^2 + c0 b0^4 mu0^2``:

        mu    = mu(0) R
        alpha = R'/(4 a R) - d/(2a)
        beta  = b0 w / R
        gamma = gamma(0) - arg(m + i sqrt(c0) b0^2 mu0) / (2 sqrt(c0))
        delta = w [I (m r + c0 b0^4 mu0) + m Q + c0 e0 b0^3 mu0] / R^2
        eps   = [e0 m - b0 (Q mu0 - mu1 I)] / R

    and kappa as in the code. For ``c0 < 0`` the arctangent becomes an inverse
    hyperbolic tangent; ``c0 = 0`` reproduces the Riccati solution with l0=+1.
    The ``l0`` entry of ``params`` is ignored.
    """
    B, coeffs, p = kernel.basis, kernel.coeffs, params
    r = 2 * p.alpha0 + B.d0 / B.a0
    b0, e0 = p.beta0, p.eps0
    k4 = c0 * b0**4
    kG = _g_phase(coeffs, B.t_max)

    def parts(t):
        t = np.asarray(t, dtype=float)
        m0, m1 = B.mu0(t), B.mu1(t)
        I, L, N = B.quadratures(t)
        m = r * m0 + m1
        R2 = m * m + k4 * m0 * m0
        return t, m0, m1, m, R2, I, L, N

    def root(m, R2):
        # with c0 = 0 keep the sign of m so the Riccati solution is reproduced
        if k4 == 0:
            return m
        with np.errstate(invalid="ignore"):
            return np.sqrt(R2)

    def mu(t):
        _, _, _, m, R2, *_ = parts(t)
        return p.mu0 * root(m, R2)

    def alpha(t):
        t, m0, m1, m, R2, *_ = parts(t)
        dm0 = B.dmu0(t)
        dm = r * dm0 + B.dmu1(t)
        a = coeffs.a(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (m * dm + k4 * m0 * dm0) / (4 * a * R2) - coeffs.d(t) / (2 * a)

    def beta(t):
        t, _, _, m, R2, *_ = parts(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return b0 * B.w(t) / root(m, R2)

    t1 = B.t_max
    if c0 > 0:
        sc = np.sqrt(c0)
        angle = _unwrapped_angle(lambda t: sc * b0**2 * B.mu0(t), lambda t: r * B.mu0(t) + B.mu1(t), 0.0, t1)

        def gamma(t):
            return p.gamma0 - angle(t) / (2 * sc)
    elif c0 < 0:
        sc = np.sqrt(-c0)

        def gamma(t):
            _, m0, _, m, *_ = parts(t)
            with np.errstate(divide="ignore", invalid="ignore"):
                return p.gamma0 - np.arctanh(sc * b0**2 * m0 / m) / (2 * sc)
    else:
        def gamma(t):
            _, m0, _, m, *_ = parts(t)
            with np.errstate(divide="ignore"):
                return p.gamma0 - b0**2 * m0 / (2 * m)

    def delta(t):
        t, m0, m1, m, R2, I, L, _ = parts(t)
        Q = p.delta0 + L
        with np.errstate(divide="ignore", invalid="ignore"):
            return B.w(t) * (I * (m * r + k4 * m0) + m * Q + c0 * e0 * b0**3 * m0) / R2

    def eps(t):
        _, m0, m1, m, R2, I, L, _ = parts(t)
        Q = p.delta0 + L
        with np.errstate(divide="ignore", invalid="ignore"):
            return (e0 * m - b0 * (Q * m0 - m1 * I)) / root(m, R2)

    def kappa(t):
        t, m0, m1, m, R2, I, L, N = parts(t)
        Q = p.delta0 + L
        Pm = Q * m0 - m1 * I
        num = (m1 * I * I * (m * r + k4 * m0) + 2 * m * Q * m1 * I - m * Q * Q * m0
               - 2 * c0 * b0**3 * e0 * Pm * m0 + c0 * b0**2 * e0**2 * m * m0)
        with np.errstate(divide="ignore", invalid="ignore"):
            return p.kappa0 - N + num / (2 * R2) - kG(t)

    def xi(t):
        return xi0 * (gamma(t) - p.gamma0)

    return PhaseSolution(
        kind="ermakov", coeffs=coeffs, params=params, domain=(0.0, t1),
        alpha=alpha, beta=beta, gamma=gamma, delta=delta, eps=eps, kappa=kappa, mu=mu,
        kernel=kernel, c0=float(c0), extras={"xi0": float(xi0), "h0": float(h0), "xi": xi},
    )


def balanced_coefficients(base: CoefficientSet, sol: PhaseSolution) -> CoefficientSet:
    """Coefficients of the equation solved by the Ermakov soliton.

        B = b - c0 a beta^4
        M = f + 2 c0 a beta^3 eps      (enters as -M x psi, i.e. the new f)
        G = G_base - c0 a beta^2 eps^2 (constant potential, enters as +G psi)
        h = h0 a beta^2 mu

    The potential term carries a minus sign: the Ermakov kappa equation has
    ``+c0 a beta^2 eps^2`` and a potential ``+G psi`` shifts kappa by ``-G``.
    """
    c0 = sol.c0
    h0 = sol.extras.get("h0", 0.0)
    a = base.a

    def b_new(t):
        return base.b(t) - c0 * a(t) * sol.beta(t) ** 4

    def f_new(t):
        return base.f(t) + 2 * c0 * a(t) * sol.beta(t) ** 3 * sol.eps(t)

    def G_new(t):
        return base.G(t) - c0 * a(t) * sol.beta(t) ** 2 * sol.eps(t) ** 2

    def h_new(t):
        return h0 * a(t) * sol.beta(t) ** 2 * sol.mu(t)

    return CoefficientSet(
        a=base.a, b=b_new, c=base.c, d=base.d, f=f_new, g=base.g, h=h_new, G=G_new,
        s=1.0, l0=1, dimension=base.dimension,
    )


def ermakov_residual_terms(coeffs: CoefficientSet, sol: PhaseSolution, t):
    """Right-hand sides ``(F_alpha, ..., F_kappa)`` with ``x' = F_x`` for the Ermakov system."""
    t = np.asarray(t, dtype=float)
    a, b, c, f, g, G = (getattr(coeffs, n)(t) for n in ("a", "b", "c", "f", "g", "G"))
    al, be, de, ep = sol.alpha(t), sol.beta(t), sol.delta(t), sol.eps(t)
    c0 = sol.c0
    k = c + 4 * a * al
    return (
        -b - 2 * c * al - 4 * a * al**2 + c0 * a * be**4,
        -k * be,
        -a * be**2,
        -k * de + f + 2 * al * g + 2 * c0 * a * be**3 * ep,
        (g - 2 * a * de) * be,
        g * de - a * de**2 + c0 * a * be**2 * ep**2 - G,
    )
