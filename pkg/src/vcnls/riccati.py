"""Riccati system for the phase functions and its multiparameter solution.

The phase ansatz ``psi = mu^{-1/2} exp(i(alpha x^2 + delta x + kappa)) u(gamma, beta x + eps)``
requires

    alpha' + b + 2c alpha + 4a alpha^2 = 0
    beta'  + (c + 4a alpha) beta = 0
    gamma' + l0 a beta^2 = 0
    delta' + (c + 4a alpha) delta = f + 2 alpha g
    eps'   = (g - 2a delta) beta
    kappa' = g delta - a delta^2

All multiparameter formulas are evaluated in a regular form built from

    m(t) = (2 alpha(0) + d(0)/a(0)) mu0(t) + mu1(t),      mu = mu(0) m,

so nothing divides by ``mu0`` and the removable poles at t=0 never appear.
A spatially constant potential ``G(t)`` only shifts the phase, so it is
absorbed as ``kappa -= int_0^t G``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .characteristic import CharacteristicBasis
from .coeffs import CoefficientSet, ScenarioError

__all__ = [
    "ConsistencyError",
    "PhaseSolution",
    "RiccatiKernel",
    "RiccatiParameters",
    "alternative_solve",
    "antiderivative",
    "kappa_nonlinear",
    "riccati_kernel",
    "riccati_multiparameter",
]

PHASE_NAMES = ("alpha", "beta", "gamma", "delta", "eps", "kappa", "mu")


class ConsistencyError(ValueError):
    pass


def antiderivative(fn: Callable, t_max: float, tol: float = 1e-12, t0: float = 0.0):
    """Dense antiderivative ``F(t) = int_t0^t fn`` on ``[t0, t_max]``."""
    res = solve_ivp(lambda t, y: np.atleast_1d(fn(t)), (t0, t_max), [0.0], method="DOP853",
                    rtol=tol, atol=tol * 1e-6, dense_output=True)
    if res.status != 0:
        raise ScenarioError(f"quadrature failed: {res.message}")
    sol = res.sol

    def F(t):
        t = np.asarray(t, dtype=float)
        return sol(np.clip(t.ravel(), t0, t_max))[0].reshape(t.shape)

    return F


@dataclass(frozen=True)
class RiccatiParameters:
    mu0: float = 1.0
    alpha0: float = 0.0
    beta0: float = 1.0
    gamma0: float = 0.0
    delta0: float = 0.0
    eps0: float = 0.0
    kappa0: float = 0.0
    l0: int = 1

    def __post_init__(self):
        if self.mu0 == 0:
            raise ValueError("mu(0) must be nonzero")
        if self.beta0 == 0:
            raise ValueError("beta(0) must be nonzero")
        if self.l0 not in (1, -1):
            raise ValueError("l0 must be +1 or -1")

    @classmethod
    def from_mapping(cls, data) -> "RiccatiParameters":
        keys = ("mu0", "alpha0", "beta0", "gamma0", "delta0", "eps0", "kappa0", "l0")
        return cls(**{k: data[k] for k in keys if k in data})


@dataclass(frozen=True)
class RiccatiKernel:
    """The kernel functions alpha0..kappa0 on top of a characteristic basis.

    ``delta0 = w I/mu0``, ``eps0 = L - mu1 I/mu0`` and
    ``kappa0 = mu1 I^2/(2 mu0) - N`` in terms of the basis quadratures, which
    is the integrated-by-parts form of the usual kernel integrals and stays
    finite where ``mu0'`` vanishes.
    """

    basis: CharacteristicBasis
    coeffs: CoefficientSet
    caustic: float | None = None

    @property
    def t_max(self):
        return self.basis.t_max

    def w(self, t):
        return self.basis.w(t)

    def alpha0(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.basis.dmu0(t) / self.basis.mu0(t)) / (4 * self.coeffs.a(t)) - self.coeffs.d(t) / (2 * self.coeffs.a(t))

    def beta0(self, t):
        with np.errstate(divide="ignore"):
            return -self.basis.w(t) / self.basis.mu0(t)

    def gamma0(self, t):
        with np.errstate(divide="ignore"):
            return self.basis.d0 / (2 * self.basis.a0) + self.basis.mu1(t) / (2 * self.basis.mu0(t))

    def _limit(self, t, value, at_zero):
        t = np.asarray(t, dtype=float)
        return np.where(t == 0.0, at_zero, value)

    def delta0(self, t):
        I, _, _ = self.basis.quadratures(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = self.basis.w(t) * I / self.basis.mu0(t)
        return self._limit(t, v, self._delta00())

    def eps0(self, t):
        I, L, _ = self.basis.quadratures(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = L - self.basis.mu1(t) * I / self.basis.mu0(t)
        return self._limit(t, v, -self._delta00())

    def kappa0(self, t):
        I, _, N = self.basis.quadratures(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = self.basis.mu1(t) * I * I / (2 * self.basis.mu0(t)) - N
        return self._limit(t, v, 0.0)

    def _delta00(self):
        return float(self.coeffs.g(0.0)) / (2 * self.basis.a0)


def riccati_kernel(basis: CharacteristicBasis, coeffs: CoefficientSet | None = None) -> RiccatiKernel:
    """Build the kernel; records the first interior zero of ``mu0`` as ``caustic``."""
    coeffs = coeffs if coeffs is not None else basis.coeffs
    ts = np.linspace(0.0, basis.t_max, 2001)[1:]
    m0 = basis.mu0(ts)
    flips = np.nonzero(np.sign(m0[1:]) != np.sign(m0[:-1]))[0]
    caustic = float(ts[flips[0]]) if flips.size else None
    return RiccatiKernel(basis=basis, coeffs=coeffs, caustic=caustic)


@dataclass(frozen=True)
class PhaseSolution:
    """Phase functions alpha..kappa and mu as evaluators of t.

    ``kind`` is ``"riccati"``, ``"ermakov"`` or ``"alternative"``; ``c0`` is the
    Ermakov constant (0 for the Riccati system).
    """

    kind: str
    coeffs: CoefficientSet
    params: RiccatiParameters
    domain: tuple[float, float]
    alpha: Callable
    beta: Callable
    gamma: Callable
    delta: Callable
    eps: Callable
    kappa: Callable
    mu: Callable
    kernel: RiccatiKernel | None = None
    c0: float = 0.0
    extras: dict = field(default_factory=dict)

    def evaluate(self, t) -> dict:
        return {name: getattr(self, name)(t) for name in PHASE_NAMES}

    def with_kappa(self, kappa: Callable, **extras) -> "PhaseSolution":
        from dataclasses import replace

        return replace(self, kappa=kappa, extras={**self.extras, **extras})

    def to_csv(self, path, t) -> Path:
        t = np.asarray(t, dtype=float)
        vals = self.evaluate(t)
        data = np.column_stack([t] + [np.broadcast_to(vals[n], t.shape) for n in PHASE_NAMES])
        path = Path(path)
        np.savetxt(path, data, delimiter=",", fmt="%.17g", header="t," + ",".join(PHASE_NAMES), comments="")
        return path


def _g_phase(coeffs: CoefficientSet, t_max: float):
    if coeffs.is_zero("G"):
        return lambda t: np.zeros_like(np.asarray(t, dtype=float))
    return antiderivative(coeffs.G, t_max)


def riccati_multiparameter(kernel: RiccatiKernel, params: RiccatiParameters) -> PhaseSolution:
    """Multiparameter solution of the Riccati system in regular form.

    With ``r = 2 alpha(0) + d(0)/a(0)``, ``m = r mu0 + mu1`` and ``Q = delta(0) + L``:

        mu    = mu(0) m
        alpha = m'/(4 a m) - d/(2a)
        beta  = beta(0) w / m
        gamma = l0 gamma(0) - l0 beta(0)^2 mu0 / (2m)
        delta = w (r I + Q) / m
        eps   = eps(0) - beta(0) (Q mu0 - mu1 I) / m
        kappa = kappa(0) - N + (r mu1 I^2 + 2 Q mu1 I - Q^2 mu0) / (2m)

    These coincide with the textbook expressions in ``alpha(0) + gamma0(t)``
    wherever those are finite. Zeros of ``m`` are genuine blow-up points.
    """
    B, coeffs, p = kernel.basis, kernel.coeffs, params
    r = 2 * p.alpha0 + B.d0 / B.a0
    kG = _g_phase(coeffs, B.t_max)

    def parts(t):
        t = np.asarray(t, dtype=float)
        m0, m1 = B.mu0(t), B.mu1(t)
        I, L, N = B.quadratures(t)
        return t, m0, m1, r * m0 + m1, I, L, N

    def mu(t):
        return p.mu0 * parts(t)[3]

    def alpha(t):
        t = np.asarray(t, dtype=float)
        m = r * B.mu0(t) + B.mu1(t)
        dm = r * B.dmu0(t) + B.dmu1(t)
        a = coeffs.a(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return dm / (4 * a * m) - coeffs.d(t) / (2 * a)

    def beta(t):
        _, _, _, m, *_ = parts(t)
        with np.errstate(divide="ignore"):
            return p.beta0 * B.w(t) / m

    def gamma(t):
        _, m0, _, m, *_ = parts(t)
        with np.errstate(divide="ignore"):
            return p.l0 * p.gamma0 - p.l0 * p.beta0**2 * m0 / (2 * m)

    def delta(t):
        _, _, _, m, I, L, _ = parts(t)
        with np.errstate(divide="ignore"):
            return B.w(t) * (r * I + p.delta0 + L) / m

    def eps(t):
        _, m0, m1, m, I, L, _ = parts(t)
        Q = p.delta0 + L
        with np.errstate(divide="ignore"):
            return p.eps0 - p.beta0 * (Q * m0 - m1 * I) / m

    def kappa(t):
        t, m0, m1, m, I, L, N = parts(t)
        Q = p.delta0 + L
        with np.errstate(divide="ignore"):
            return p.kappa0 - N + (r * m1 * I**2 + 2 * Q * m1 * I - Q**2 * m0) / (2 * m) - kG(t)

    return PhaseSolution(
        kind="riccati", coeffs=coeffs, params=params, domain=(0.0, B.t_max),
        alpha=alpha, beta=beta, gamma=gamma, delta=delta, eps=eps, kappa=kappa, mu=mu,
        kernel=kernel,
    )


def kappa_nonlinear(sol: PhaseSolution, coeffs: CoefficientSet | None = None, tol: float = 1e-12):
    """``kappa(t) - int_0^t h / mu^s`` for plane-wave type solutions.

    The returned evaluator is the full phase ``kappa`` including the
    nonlinear self-phase; the extra part alone is exposed as its ``.nonlinear``
    attribute.
    """
    coeffs = coeffs if coeffs is not None else sol.coeffs
    t_max = sol.domain[1]
    if coeffs.is_zero("h"):
        def extra(t):
            return np.zeros_like(np.asarray(t, dtype=float))
    else:
        s = coeffs.s
        mu_probe = sol.mu(np.linspace(*sol.domain, 257))
        if np.any(mu_probe <= 0):
            zero = np.linspace(*sol.domain, 257)[np.argmax(mu_probe <= 0)]
            raise ScenarioError(f"mu reaches zero near t={zero:.6g}; nonlinear phase diverges")
        F = antiderivative(lambda t: coeffs.h(t) / sol.mu(t) ** s, t_max, tol)

        def extra(t):
            return -F(t)

    base = sol.kappa

    def kappa(t):
        return base(t) + extra(t)

    kappa.nonlinear = extra
    return kappa


def alternative_solve(
    coeffs: CoefficientSet,
    g0: float = 0.0,
    kappa0: float = 0.0,
    mu0: float = 1.0,
    l0: int | None = None,
    t_max: float = 1.0,
    tol: float = 1e-13,
    consistency_tol: float = 1e-8,
) -> PhaseSolution:
    """Gauge-form solution with ``beta = 1``, ``gamma = t``, ``eps = 0``.

    Requires ``a = -l0`` and ``c' + c^2 + 4 l0 b = 0``; then

        alpha = l0 c/4,  delta = -l0 g/2,
        g     = g(0) - 2 l0 e^{-int c} int e^{int c} f,
        kappa = kappa(0) - (l0/4) int g^2,
        mu    = mu(0) exp(int (2d - c)).

    The target constant ``lambda`` is read off ``h = -l0 lambda mu`` and must
    be constant; it is stored in ``extras["lam"]``.
    """
    l0 = coeffs.l0 if l0 is None else l0
    if l0 not in (1, -1):
        raise ValueError("l0 must be +1 or -1")
    ts = np.linspace(0.0, t_max, 501)
    a_dev = float(np.max(np.abs(coeffs.a(ts) + l0 * np.ones_like(ts))))
    if a_dev > consistency_tol:
        raise ConsistencyError(f"gauge form needs a(t) = {-l0}; max deviation {a_dev:.3e}")
    c, b, d, f = coeffs.c, coeffs.b, coeffs.d, coeffs.f
    dc = coeffs.derivative("c")
    opt1 = np.abs(dc(ts) + c(ts) ** 2 + 4 * l0 * b(ts))
    opt1_max = float(np.max(opt1))
    if opt1_max > consistency_tol:
        raise ConsistencyError(
            f"c' + c^2 + 4 l0 b = 0 violated: max residual {opt1_max:.3e} at t={ts[np.argmax(opt1)]:.6g}"
        )

    forced = not coeffs.is_zero("f")

    # states: int c, int e^{int c} f, int g^2, int (2d - c), int G
    def rhs(t, y):
        C = y[0]
        g = g0 - 2 * l0 * np.exp(-C) * y[1]
        return np.array([
            c(t),
            np.exp(C) * f(t) if forced else 0.0,
            g * g,
            2 * d(t) - c(t),
            coeffs.G(t),
        ], dtype=float)

    res = solve_ivp(rhs, (0.0, t_max), np.zeros(5), method="DOP853", rtol=tol,
                    atol=tol * 1e-6, dense_output=True)
    if res.status != 0:
        raise ScenarioError(f"alternative system integration failed: {res.message}")
    dense = res.sol

    def state(t):
        t = np.asarray(t, dtype=float)
        y = dense(np.clip(t.ravel(), 0.0, t_max))
        return t, y.reshape((5,) + t.shape)

    def g_of(t):
        _, y = state(t)
        return g0 - 2 * l0 * np.exp(-y[0]) * y[1]

    def mu(t):
        _, y = state(t)
        return mu0 * np.exp(y[3])

    def alpha(t):
        return l0 * c(np.asarray(t, dtype=float)) / 4

    def beta(t):
        return np.ones_like(np.asarray(t, dtype=float))

    def gamma(t):
        return np.asarray(t, dtype=float) * 1.0

    def delta(t):
        return -l0 * g_of(t) / 2

    def eps(t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def kappa(t):
        _, y = state(t)
        return kappa0 - l0 * y[2] / 4 - y[4]

    g_dev = float(np.max(np.abs(g_of(ts) - coeffs.g(ts))))
    extras = {"opt1_residual": opt1_max, "g_deviation": g_dev, "g": g_of}
    if g_dev > consistency_tol * max(1.0, float(np.max(np.abs(coeffs.g(ts))))):
        raise ConsistencyError(f"g(t) does not satisfy g' + 2 l0 f + c g = 0 from g(0)={g0}: max deviation {g_dev:.3e}")

    if coeffs.is_zero("h"):
        extras["lam"] = 0.0
    else:
        ratio = -l0 * coeffs.h(ts) / mu(ts)
        lam = float(ratio[0])
        spread = float(np.max(np.abs(ratio - lam)))
        if spread > 1e-8 * max(1.0, abs(lam)):
            raise ConsistencyError(f"h/mu is not constant (spread {spread:.3e}); lambda undefined")
        extras["lam"] = lam

    params = RiccatiParameters(mu0=mu0, alpha0=l0 * float(c(0.0)) / 4, beta0=1.0, gamma0=0.0,
                               delta0=-l0 * g0 / 2, eps0=0.0, kappa0=kappa0, l0=l0)
    return PhaseSolution(
        kind="alternative", coeffs=coeffs, params=params, domain=(0.0, float(t_max)),
        alpha=alpha, beta=beta, gamma=gamma, delta=delta, eps=eps, kappa=kappa, mu=mu,
        extras=extras,
    )
