"""Seed solutions of constant-coefficient NLS equations.

Every seed records the target equation it solves,

    i u_tau - l0 Laplacian(u) + l0 lam |u|^(2s) u = 0,

as the pair ``(l0, lam)`` plus the power ``s``; the transforms check this
against the variable-coefficient equation before assembling a solution.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.integrate import solve_ivp

from .special import ellipk, jacobi_elliptic

__all__ = [
    "ProfileError",
    "ProfileSolution",
    "SeedSolution",
    "SEED_KINDS",
    "build_seed",
    "elliptic_profile",
    "ground_state_radial",
]

SEED_KINDS = (
    "bright", "dark", "sech_cubic", "cn_wave", "sn_wave", "peregrine",
    "ground_state_1d", "ground_state_radial", "pseudoconformal", "custom_profile",
)


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class ProfileSolution:
    """Real profile ``F(z)`` with ``F'' = -xi0 F + h0 F^3``.

    ``C0 = F'^2 + xi0 F^2 - (h0/2) F^4`` is the first integral. Radial ground
    states reuse this type with ``regime == "radial"``; then ``F(rho)`` solves
    ``Q'' + (n-1) Q'/rho - Q + Q^p = 0``.
    """

    F: Callable
    dF: Callable
    xi0: float
    h0: float
    C0: float
    source: str
    regime: str
    period: float | None = None
    info: Mapping = field(default_factory=dict)

    def __call__(self, z):
        return self.F(z)

    def first_integral(self, z):
        z = np.asarray(z, dtype=float)
        F, dF = self.F(z), self.dF(z)
        return dF**2 + self.xi0 * F**2 - 0.5 * self.h0 * F**4


def _cn_profile(xi0, h0, C0):
    r = np.sqrt(xi0 * xi0 - 2 * C0 * h0)
    amp = np.sqrt((r - xi0) / (-h0))
    k = float(np.sqrt(np.clip((r - xi0) / (2 * r), 0.0, 1.0)))
    kap = np.sqrt(r)

    def F(z):
        return amp * jacobi_elliptic(kap * np.asarray(z, dtype=float), k)[1]

    def dF(z):
        sn, _, dn = jacobi_elliptic(kap * np.asarray(z, dtype=float), k)
        return -amp * kap * sn * dn

    period = None if k == 1.0 else 4 * ellipk(k) / kap
    return ProfileSolution(F, dF, xi0, h0, C0, "closed_form", "cn", period, {"k": k, "amplitude": amp})


def _sn_closed(xi0, h0, C0):
    """``F = A sn(kappa z, k)`` with kappa^2 = (xi0 + r)/2, k^2 = (xi0 - r)/(xi0 + r), A^2 = (xi0 - r)/h0."""
    r = np.sqrt(max(xi0 * xi0 - 2 * C0 * h0, 0.0))
    kap = np.sqrt((xi0 + r) / 2)
    k = float(np.sqrt(np.clip((xi0 - r) / (xi0 + r), 0.0, 1.0)))
    amp = np.sqrt((xi0 - r) / h0)

    def F(z):
        return amp * jacobi_elliptic(kap * np.asarray(z, dtype=float), k)[0]

    def dF(z):
        _, cn, dn = jacobi_elliptic(kap * np.asarray(z, dtype=float), k)
        return amp * kap * cn * dn

    return F, dF, k, kap, amp


def _sn_numeric(xi0, h0, C0, tol=1e-13):
    """Integrate from the zero crossing to the first turning point and extend.

    The quarter period ends where ``F' = 0``; oddness about 0 and evenness
    about the turning point give the full periodic orbit.
    """

    def rhs(z, y):
        return [y[1], -xi0 * y[0] + h0 * y[0] ** 3]

    def turn(z, y):
        return y[1]

    turn.terminal = True
    turn.direction = -1
    res = solve_ivp(rhs, (0.0, 1e4), [0.0, np.sqrt(C0)], method="DOP853", rtol=tol,
                    atol=tol * 1e-3, dense_output=True, events=turn)
    if res.status != 1:
        raise ProfileError("no turning point found for the sn-type orbit")
    zq = float(res.t_events[0][0])
    sol = res.sol

    def fold(z):
        z = np.asarray(z, dtype=float)
        s = np.mod(z, 4 * zq)
        sign = np.where(s < 2 * zq, 1.0, -1.0)
        s2 = np.mod(s, 2 * zq)
        back = s2 > zq
        local = np.where(back, 2 * zq - s2, s2)
        return local, sign, back

    def F(z):
        local, sign, _ = fold(z)
        return sign * sol(local.ravel())[0].reshape(local.shape)

    def dF(z):
        local, sign, back = fold(z)
        d = sol(local.ravel())[1].reshape(local.shape)
        return sign * np.where(back, -d, d)

    return F, dF, 4 * zq


def _fallback_numeric(xi0, h0, C0, z_max=60.0, tol=1e-12):
    # turning points: C0 - xi0 X + (h0/2) X^2 = 0 with X = F^2 > 0
    roots = np.roots([0.5 * h0, -xi0, C0]) if h0 != 0 else np.array([C0 / xi0]) if xi0 != 0 else np.array([])
    roots = np.real(roots[np.isreal(roots)])
    roots = roots[roots > 0]
    if roots.size == 0:
        raise ProfileError(f"no bounded profile for xi0={xi0}, h0={h0}, C0={C0}")
    F0 = float(np.sqrt(roots.max()))

    def rhs(z, y):
        return [y[1], -xi0 * y[0] + h0 * y[0] ** 3]

    res = solve_ivp(rhs, (0.0, z_max), [F0, 0.0], method="DOP853", rtol=tol, atol=tol * 1e-3, dense_output=True)
    if res.status != 0 or not np.all(np.isfinite(res.y)) or np.max(np.abs(res.y[0])) > 1e3 * F0:
        raise ProfileError(f"numeric profile diverges for xi0={xi0}, h0={h0}, C0={C0}")
    sol = res.sol

    def F(z):
        z = np.abs(np.asarray(z, dtype=float))
        if np.any(z > z_max):
            raise ProfileError(f"profile evaluated beyond |z| = {z_max}")
        return sol(z.ravel())[0].reshape(z.shape)

    def dF(z):
        z = np.asarray(z, dtype=float)
        return np.sign(z) * sol(np.abs(z).ravel())[1].reshape(z.shape)

    return ProfileSolution(F, dF, xi0, h0, C0, "numeric", "turning_point", None, {"F0": F0, "z_max": z_max})


def elliptic_profile(xi0: float, h0: float, C0: float) -> ProfileSolution:
    """Profile solving ``F'' = -xi0 F + h0 F^3`` with first integral ``C0``.

    * ``h0 < 0`` and ``C0 >= 0``: closed-form cn wave; ``C0 = 0`` is the bright soliton.
    * ``xi0 > 0``, ``h0 > 0`` and ``0 < C0 <= xi0^2/(2 h0)``: sn wave, built
      numerically and cross-checked against the closed form (``info``); the
      upper end is the dark soliton ``sqrt(xi0/h0) tanh(sqrt(xi0/2) z)``.
    * anything else: numeric orbit started at a turning point.
    """
    xi0, h0, C0 = float(xi0), float(h0), float(C0)
    if h0 < 0 and C0 >= 0:
        return _cn_profile(xi0, h0, C0)
    if xi0 > 0 and h0 > 0 and 0 < C0 <= xi0 * xi0 / (2 * h0) * (1 + 1e-14):
        Fc, dFc, k, kap, amp = _sn_closed(xi0, h0, C0)
        if k >= 1.0 - 1e-12:
            return ProfileSolution(Fc, dFc, xi0, h0, C0, "closed_form", "dark", None, {"k": 1.0, "amplitude": amp})
        F, dF, period = _sn_numeric(xi0, h0, C0)
        zs = np.linspace(0.0, period, 401)
        dev = float(np.max(np.abs(F(zs) - Fc(zs))))
        return ProfileSolution(F, dF, xi0, h0, C0, "numeric", "sn", period,
                               {"k": k, "amplitude": amp, "closed_form_deviation": dev})
    return _fallback_numeric(xi0, h0, C0)


def _radial_tail(n):
    if n == 1:
        return lambda r: np.exp(-r), lambda r: -np.exp(-r)

    def K(r):
        return np.exp(-r) / np.sqrt(r) * (1 - 1 / (8 * r) + 9 / (128 * r * r) - 225 / (3072 * r**3))

    def dK(r):
        h = 1e-5 * r
        return (K(r + h) - K(r - h)) / (2 * h)

    return K, dK


def ground_state_radial(n: int = 2, p: float = 3.0, tol: float = 1e-13, rho_max: float = 40.0) -> ProfileSolution:
    """Positive decaying solution of ``Q'' + (n-1) Q'/rho - Q + Q^p = 0``.

    Shooting on ``Q(0)``: a zero crossing means the guess was too large, a
    turn back upwards means too small. Bisection stops when the bracket is
    below ``tol`` relative. The profile is integrated until it has decayed
    by 1e-5 and continued with the linear far-field tail.
    """
    if n not in (1, 2):
        raise ValueError("n must be 1 or 2")
    if not p > 1:
        raise ValueError("p must exceed 1")
    rho0 = 1e-4

    def rhs(r, y):
        return [y[1], -(n - 1) * y[1] / r + y[0] - np.abs(y[0]) ** (p - 1) * y[0]]

    def start(q):
        c2 = (q - q**p) / (2 * n)
        return [q + c2 * rho0**2, 2 * c2 * rho0]

    def cross(r, y):
        return y[0]

    cross.terminal = True

    def turn(r, y):
        return y[1]

    turn.terminal = True
    turn.direction = 1

    def shoot(q, events=(cross, turn), dense=False):
        # a short max_step keeps the dense interpolant smooth enough to difference
        extra = {"max_step": 0.02} if dense else {}
        return solve_ivp(rhs, (rho0, rho_max), start(q), method="DOP853", rtol=1e-12, atol=1e-15,
                         events=list(events), dense_output=dense, **extra)

    def overshoots(q):
        res = shoot(q)
        if res.t_events[0].size:
            return True
        if res.t_events[1].size:
            return False
        raise ProfileError("shooting did not classify the initial value")

    lo, hi = 1.0 + 1e-6, 2.0
    while overshoots(hi) is False:
        hi *= 2
        if hi > 1e3:
            raise ProfileError("bracket not found")
    if overshoots(lo):
        raise ProfileError("bracket not found")
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if overshoots(mid):
            hi = mid
        else:
            lo = mid
    q = 0.5 * (lo + hi)

    def small(r, y):
        return y[0] - 1e-5 * q

    small.terminal = True
    res = shoot(q, events=(small,), dense=True)
    if not res.t_events[0].size:
        raise ProfileError("profile did not decay")
    rc = float(res.t_events[0][0])
    core = res.sol
    tail, dtail = _radial_tail(n)
    scale = 1e-5 * q / tail(rc)

    def series(r):
        c2 = (q - q**p) / (2 * n)
        return q + c2 * r * r, 2 * c2 * r

    def Q(rho):
        r = np.abs(np.asarray(rho, dtype=float))
        out = np.empty_like(r)
        a = r < rho0
        b = (r >= rho0) & (r <= rc)
        c = r > rc
        out[a] = series(r[a])[0]
        if b.any():
            out[b] = core(r[b])[0]
        out[c] = scale * tail(r[c])
        return out

    def dQ(rho):
        rho = np.asarray(rho, dtype=float)
        r = np.abs(rho)
        out = np.empty_like(r)
        a = r < rho0
        b = (r >= rho0) & (r <= rc)
        c = r > rc
        out[a] = series(r[a])[1]
        if b.any():
            out[b] = core(r[b])[1]
        out[c] = scale * dtail(r[c])
        return np.sign(rho) * out if n == 1 else out

    h0 = -1.0 if p == 3 else float("nan")
    return ProfileSolution(Q, dQ, -1.0, h0, 0.0, "numeric", "radial", None,
                           {"n": n, "p": p, "Q0": q, "matching_radius": rc})


@dataclass(frozen=True)
class SeedSolution:
    """Closed-form or profile-based solution ``u(tau, xi[, eta])``."""

    kind: str
    params: Mapping
    l0: int
    lam: float
    s: float
    dimension: int
    u: Callable
    profile: ProfileSolution | None = None

    @property
    def target_equation(self):
        return (self.l0, self.lam)

    def __call__(self, tau, xi, eta=None):
        if self.dimension == 2:
            return self.u(tau, xi, eta)
        return self.u(tau, xi)


def _require(params, *names):
    missing = [n for n in names if n not in params]
    if missing:
        raise ValueError(f"missing seed parameter(s): {missing}")


def build_seed(kind: str, params: Mapping | None = None) -> SeedSolution:
    """Construct a seed by name; see ``SEED_KINDS``.

    bright:    sqrt(2v/(-lam)) sech(sqrt(v) xi) exp(-i l0 v tau), default l0=1, lam=-2
    dark:      A tanh(A xi) exp(2 i l0 A^2 tau), lam=2, default l0=-1
    sech_cubic: sqrt(-2v/3) sech(sqrt(-v) xi) exp(-i v tau), v<0, l0=-1, lam=-3
    peregrine: scale times the rational solution of i u_t + u_xx + 2|u|^2 u = 0
    ground_state_1d: exp(-i l0 tau) (s+1)^(1/2s) cosh^(-1/s)(s xi), lam=-1
    cn_wave/sn_wave/custom_profile: F(xi) exp(i l0 xi0 tau) with lam = h0
    ground_state_radial: exp(-i l0 tau) Q(|(xi, eta)|) in 2D, lam=-1
    pseudoconformal: tau^-1 Q(r/tau) exp(i r^2/(4 tau) - i/tau), l0=-1, lam=-1
    """
    params = dict(params or {})
    if kind == "bright":
        _require(params, "v")
        v = float(params["v"])
        l0 = int(params.get("l0", 1))
        lam = float(params.get("lam", -2.0))
        if v <= 0 or lam >= 0:
            raise ValueError("bright seed needs v > 0 and lam < 0")
        amp, sv = np.sqrt(2 * v / -lam), np.sqrt(v)

        def u(tau, xi):
            return amp / np.cosh(sv * np.asarray(xi)) * np.exp(-1j * l0 * v * np.asarray(tau))

        return SeedSolution(kind, params, l0, lam, 1.0, 1, u)

    if kind == "sech_cubic":
        _require(params, "v")
        v = float(params["v"])
        if v >= 0:
            raise ValueError("sech_cubic seed needs v < 0")
        seed = build_seed("bright", {"v": -v, "l0": -1, "lam": -3.0})
        return SeedSolution(kind, params, -1, -3.0, 1.0, 1, seed.u)

    if kind == "dark":
        _require(params, "A")
        A = float(params["A"])
        l0 = int(params.get("l0", -1))

        def u(tau, xi):
            return A * np.tanh(A * np.asarray(xi)) * np.exp(2j * l0 * A * A * np.asarray(tau))

        return SeedSolution(kind, params, l0, 2.0, 1.0, 1, u)

    if kind == "peregrine":
        _require(params, "A")
        A = float(params["A"])
        scale = float(params.get("scale", 1.0))
        if scale == 0:
            raise ValueError("peregrine scale must be nonzero")

        def u(tau, xi):
            t, x = np.asarray(tau, dtype=float), np.asarray(xi, dtype=float)
            A2 = A * A
            num = 3 + 16j * A2 * t - 16 * A2 * A2 * t * t - 4 * A2 * x * x
            den = 1 + 16 * A2 * A2 * t * t + 4 * A2 * x * x
            return scale * A * np.exp(2j * A2 * t) * num / den

        return SeedSolution(kind, params, -1, -2.0 / scale**2, 1.0, 1, u)

    if kind == "ground_state_1d":
        s = float(params.get("s", 1.0))
        l0 = int(params.get("l0", 1))
        if s <= 0:
            raise ValueError("ground_state_1d needs s > 0")
        amp = (s + 1) ** (1 / (2 * s))

        def u(tau, xi):
            return amp * np.cosh(s * np.asarray(xi)) ** (-1 / s) * np.exp(-1j * l0 * np.asarray(tau))

        return SeedSolution(kind, params, l0, -1.0, s, 1, u)

    if kind in ("cn_wave", "sn_wave", "custom_profile"):
        _require(params, "xi0", "h0", "C0")
        prof = elliptic_profile(params["xi0"], params["h0"], params["C0"])
        if kind == "cn_wave" and prof.regime != "cn":
            raise ValueError("cn_wave parameters are outside the cn regime (need h0 < 0, C0 >= 0)")
        if kind == "sn_wave" and prof.regime not in ("sn", "dark"):
            raise ValueError("sn_wave parameters are outside the sn regime")
        l0 = int(params.get("l0", 1))
        xi0 = prof.xi0

        def u(tau, xi):
            return prof.F(xi) * np.exp(1j * l0 * xi0 * np.asarray(tau))

        return SeedSolution(kind, params, l0, prof.h0, 1.0, 1, u, prof)

    if kind == "ground_state_radial":
        l0 = int(params.get("l0", 1))
        prof = params.get("profile") or ground_state_radial(2, 3.0)

        def u(tau, xi, eta):
            return prof.F(np.hypot(xi, eta)) * np.exp(-1j * l0 * np.asarray(tau))

        clean = {k: v for k, v in params.items() if k != "profile"}
        return SeedSolution(kind, clean, l0, -1.0, 1.0, 2, u, prof)

    if kind == "pseudoconformal":
        prof = params.get("profile") or ground_state_radial(2, 3.0)

        def u(tau, xi, eta):
            tau = np.asarray(tau, dtype=float)
            r2 = np.asarray(xi) ** 2 + np.asarray(eta) ** 2
            with np.errstate(divide="ignore", invalid="ignore"):
                return prof.F(np.sqrt(r2) / tau) / tau * np.exp(1j * r2 / (4 * tau) - 1j / tau)

        clean = {k: v for k, v in params.items() if k != "profile"}
        return SeedSolution(kind, clean, -1, -1.0, 1.0, 2, u, prof)

    raise ValueError(f"unknown seed kind {kind!r}; expected one of {SEED_KINDS}")
