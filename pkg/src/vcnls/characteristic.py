"""Characteristic equation of the Riccati system and its fundamental basis.

The substitution ``alpha = mu'/(4 a mu) - d/(2a)`` turns the alpha equation
into the linear ODE

    mu'' - tau(t) mu' + 4 sigma(t) mu = 0,
    tau   = a'/a - 2c + 4d,
    sigma = a b - c d + d^2 + d a'/(2a) - d'/2,

whose standard solutions mu0 (mu0(0)=0, mu0'(0)=2a(0)) and mu1 (mu1(0)=1,
mu1'(0)=0) generate every phase function downstream.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np
from scipy.integrate import solve_ivp

from . import expr as E
from .coeffs import CoefficientSet, ScenarioError
from .expr import TimeFunction

__all__ = [
    "BasisError",
    "CharacteristicBasis",
    "characteristic_coefficients",
    "solve_basis",
]


class BasisError(RuntimeError):
    pass


def _tree_form(coeffs: CoefficientSet):
    names = ("a", "b", "c", "d")
    if not all(isinstance(getattr(coeffs, n), TimeFunction) for n in names):
        return None
    a, b, c, d = (getattr(coeffs, n).tree for n in names)
    da, dd = a.diff(), d.diff()
    two, four = E.Num(2.0), E.Num(4.0)
    tau = E.add(E.sub(E.div(da, a), E.mul(two, c)), E.mul(four, d))
    sigma = E.sub(
        E.add(E.add(E.sub(E.mul(a, b), E.mul(c, d)), E.mul(d, d)),
              E.div(E.mul(d, da), E.mul(two, a))),
        E.div(dd, two),
    )
    return TimeFunction(tau), TimeFunction(sigma)


def characteristic_coefficients(coeffs: CoefficientSet):
    """Return ``(tau, sigma)`` for ``mu'' - tau mu' + 4 sigma mu = 0``.

    The ``(d/2)(a'/a - d'/d)`` term is used in its expanded form
    ``d a'/(2a) - d'/2``, which is also the correct limit when ``d`` vanishes.
    For expression-backed coefficients both results are ``TimeFunction``
    objects with analytic derivatives.
    """
    tree = _tree_form(coeffs)
    if tree is not None:
        return tree
    a, b, c, d = coeffs.a, coeffs.b, coeffs.c, coeffs.d
    da, dd = coeffs.derivative("a"), coeffs.derivative("d")

    def tau(t):
        return da(t) / a(t) - 2 * c(t) + 4 * d(t)

    def sigma(t):
        av, dv = a(t), d(t)
        return av * b(t) - c(t) * dv + dv * dv + dv * da(t) / (2 * av) - dd(t) / 2

    return tau, sigma


# state layout of the single integration pass
_MU0, _DMU0, _MU1, _DMU1, _LNW, _I, _L, _N = range(8)


@dataclass(frozen=True)
class CharacteristicBasis:
    """Fundamental solutions with dense output on ``[0, t_max]``.

    Besides ``mu0, mu1`` and their derivatives the same integration carries
    ``w = exp(-int(c - 2d))`` and three forcing quadratures used by the kernel:

        I' = [(f - d g/a) mu0 + g mu0'/(2a)] / w
        L' = [(f - d g/a) mu1 + g mu1'/(2a)] / w
        N' = I L'

    ``mu1`` is normalised to ``mu1(0) = 1``.
    """

    coeffs: CoefficientSet
    t_max: float
    a0: float
    d0: float
    source: str
    _dense: Callable = field(repr=False)
    _closed: Mapping[str, TimeFunction] = field(default_factory=dict, repr=False)
    forced: bool = False
    closed_form_deviation: float | None = None
    _memo: list = field(default_factory=list, repr=False, compare=False)

    def _states(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < -1e-12) or np.any(t > self.t_max * (1 + 1e-12) + 1e-12):
            raise ValueError(f"t outside basis domain [0, {self.t_max}]")
        flat = np.clip(np.atleast_1d(t).ravel(), 0.0, self.t_max)
        # phase functions query the same times many times in a row
        memo = self._memo
        if memo and memo[0].shape == flat.shape and np.array_equal(memo[0], flat):
            y = memo[1]
        else:
            y = self._dense(flat)
            memo[:] = [flat.copy(), y]
        return y.reshape((y.shape[0],) + t.shape)

    def _component(self, idx, t, closed_name=None, closed_deriv=False):
        if closed_name is not None and closed_name in self._closed:
            fn = self._closed[closed_name]
            return (fn.derivative() if closed_deriv else fn)(np.asarray(t, dtype=float))
        return self._states(t)[idx]

    def mu0(self, t):
        return self._component(_MU0, t, "mu0")

    def dmu0(self, t):
        return self._component(_DMU0, t, "mu0", True)

    def mu1(self, t):
        return self._component(_MU1, t, "mu1")

    def dmu1(self, t):
        return self._component(_DMU1, t, "mu1", True)

    def w(self, t):
        return np.exp(self._states(t)[_LNW])

    def quadratures(self, t):
        """Return ``(I, L, N)`` at ``t``; all zero when f and g vanish."""
        y = self._states(t)
        return y[_I], y[_L], y[_N]

    def wronskian(self, t):
        return self.mu0(t) * self.dmu1(t) - self.dmu0(t) * self.mu1(t)

    def abel_wronskian(self, t):
        """``W(0) exp(int tau)`` written as ``-2 a(t) w(t)^2``."""
        return -2.0 * self.coeffs.a(np.asarray(t, dtype=float)) * self.w(t) ** 2

    def to_csv(self, path, t) -> Path:
        t = np.asarray(t, dtype=float)
        data = np.column_stack([t, self.mu0(t), self.dmu0(t), self.mu1(t), self.dmu1(t)])
        path = Path(path)
        np.savetxt(path, data, delimiter=",", fmt="%.17g", header="t,mu0,mu0',mu1,mu1'", comments="")
        return path


def _rhs_factory(coeffs: CoefficientSet, tau, sigma, forced: bool):
    a, c, d, f, g = coeffs.a, coeffs.c, coeffs.d, coeffs.f, coeffs.g

    def rhs(t, y):
        m0, dm0, m1, dm1, lnw = y[0], y[1], y[2], y[3], y[4]
        ta, s4 = tau(t), 4.0 * sigma(t)
        out = np.empty_like(y)
        out[_MU0] = dm0
        out[_DMU0] = ta * dm0 - s4 * m0
        out[_MU1] = dm1
        out[_DMU1] = ta * dm1 - s4 * m1
        out[_LNW] = 2.0 * d(t) - c(t)
        if forced:
            av, fv, gv = a(t), f(t), g(t)
            force = fv - d(t) * gv / av
            inv_w = np.exp(-lnw)
            dI = (force * m0 + gv * dm0 / (2 * av)) * inv_w
            dL = (force * m1 + gv * dm1 / (2 * av)) * inv_w
            out[_I] = dI
            out[_L] = dL
            out[_N] = y[_I] * dL
        else:
            out[_I:] = 0.0
        return out

    return rhs


def solve_basis(
    coeffs: CoefficientSet,
    t_max: float,
    tol: float = 1e-10,
    closed_forms: Mapping[str, TimeFunction] | None = None,
) -> CharacteristicBasis:
    """Integrate the characteristic equation on ``[0, t_max]``.

    Uses an 8th-order Dormand-Prince pair with dense output. If
    ``closed_forms`` provides ``mu0`` and ``mu1`` they are used for evaluation
    and the numeric solution is kept as a cross-check, its worst relative
    deviation stored in ``closed_form_deviation``.
    """
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if not tol > 0:
        raise ValueError("tol must be positive")
    a0 = float(coeffs.a(0.0))
    if not np.isfinite(a0) or a0 == 0.0:
        raise ScenarioError("a(0) must be finite and nonzero")
    d0 = float(coeffs.d(0.0))
    tau, sigma = characteristic_coefficients(coeffs)
    forced = not (coeffs.is_zero("f") and coeffs.is_zero("g"))
    rhs = _rhs_factory(coeffs, tau, sigma, forced)
    y0 = np.zeros(8)
    y0[_DMU0] = 2.0 * a0
    y0[_MU1] = 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if not np.all(np.isfinite(rhs(0.0, y0))):
            raise BasisError("characteristic coefficients are singular at t=0")
        res = solve_ivp(rhs, (0.0, float(t_max)), y0, method="DOP853", rtol=tol,
                        atol=tol * 1e-4, dense_output=True)
    if res.status != 0 or not np.all(np.isfinite(res.y)):
        raise BasisError(f"integration failed before t_max: {res.message}")

    dense = res.sol
    closed = {}
    deviation = None
    source = "numeric"
    if closed_forms and "mu0" in closed_forms and "mu1" in closed_forms:
        closed = {k: closed_forms[k] for k in ("mu0", "mu1")}
        source = "closed_form"
        ts = np.linspace(0.0, t_max, 401)
        y = dense(ts)
        dev = 0.0
        for name, idx in (("mu0", _MU0), ("mu1", _MU1)):
            ref = closed[name](ts)
            scale = np.maximum(np.abs(ref), 1e-300)
            ok = np.isfinite(ref)
            dev = max(dev, float(np.max(np.abs(y[idx][ok] - ref[ok]) / np.maximum(scale[ok], np.abs(y[idx][ok])).clip(1e-12))))
        deviation = dev

    return CharacteristicBasis(
        coeffs=coeffs,
        t_max=float(t_max),
        a0=a0,
        d0=d0,
        source=source,
        _dense=dense,
        _closed=closed,
        forced=forced,
        closed_form_deviation=deviation,
    )
