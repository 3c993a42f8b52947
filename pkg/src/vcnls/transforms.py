"""Assembly of exact solutions from a phase solution and a seed.

The 1D lens is

    psi(t, x) = mu^{-1/2} exp(i(alpha x^2 + delta x + kappa)) u(gamma, beta x + eps)

which maps the variable-coefficient equation onto
``i u_tau - l0 u_xixi + l0 lam |u|^(2s) u = 0`` provided
``h = lam a beta^2 mu^s``. In two dimensions the prefactor is ``mu^{-1}`` and
the balance reads ``h = lam a beta^2 mu^(2s)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

import numpy as np

from .characteristic import solve_basis
from .coeffs import CoefficientSet, Scenario, ScenarioError
from .ermakov import balanced_coefficients, ermakov_multiparameter
from .riccati import (
    PhaseSolution,
    RiccatiParameters,
    alternative_solve,
    kappa_nonlinear,
    riccati_kernel,
    riccati_multiparameter,
)
from .seeds import ProfileSolution, SeedSolution, build_seed, elliptic_profile
from .special import dawson

__all__ = [
    "BalanceError",
    "ExactSolution",
    "family_closed_forms",
    "family_solution",
    "lens_apply",
    "lens_invert",
    "closed_form_solution",
    "plane_wave",
    "pseudoconformal_blowup",
    "riccati_pair_2d",
    "solve_scenario",
    "soliton_assemble",
    "transform_2d",
]


class BalanceError(ValueError):
    pass


@dataclass(frozen=True)
class ExactSolution:
    """An explicit solution ``psi(t, x)`` (or ``psi(t, x, y)``) of ``coeffs``."""

    psi: Callable
    coeffs: CoefficientSet
    domain: tuple[float, float]
    dimension: int = 1
    chain: Mapping = field(default_factory=dict)
    phase: PhaseSolution | None = None
    seed: SeedSolution | None = None
    predicted_blowup: float | None = None

    def __call__(self, t, x, y=None):
        return self.psi(t, x) if self.dimension == 1 else self.psi(t, x, y)


def _by_time(fns: Mapping[str, Callable], t):
    """Evaluate time functions once per distinct time and broadcast back."""
    t = np.asarray(t, dtype=float)
    tu, inv = np.unique(t, return_inverse=True)
    out = {}
    for k, fn in fns.items():
        v = np.broadcast_to(np.asarray(fn(tu), dtype=float), tu.shape)
        out[k] = v[inv].reshape(t.shape)
    return out


def _interior(domain, n=401):
    lo, hi = domain
    span = hi - lo
    return np.linspace(lo + 1e-3 * span, hi - 1e-3 * span, n)


def _check_balance(coeffs, sol, seed, power, tol):
    ts = _interior(sol.domain)
    a = coeffs.a(ts)
    ratio_den = a * sol.beta(ts) ** 2 * np.abs(sol.mu(ts)) ** power
    h = np.broadcast_to(coeffs.h(ts), ts.shape)
    found = h / ratio_den
    dev = np.abs(found - seed.lam) / max(1.0, abs(seed.lam))
    j = int(np.argmax(dev))
    if not np.isfinite(dev[j]) or dev[j] > tol:
        raise BalanceError(
            f"nonlinearity mismatch: h/(a beta^2 mu^{power:g}) = {found[j]:.10g} at t={ts[j]:.6g}, "
            f"seed needs lam={seed.lam:.10g} (relative deviation {dev[j]:.3e})"
        )
    return float(np.median(found))


def _check_target(sol, seed, coeffs):
    if seed.l0 != sol.params.l0:
        raise BalanceError(f"seed solves the l0={seed.l0} equation but the phase system uses l0={sol.params.l0}")
    if abs(seed.s - coeffs.s) > 1e-12:
        raise BalanceError(f"seed power s={seed.s} differs from equation power s={coeffs.s}")


def lens_apply(sol: PhaseSolution, seed: SeedSolution, coeffs: CoefficientSet | None = None,
               tol: float = 1e-8) -> ExactSolution:
    """1D lens transform of ``seed``; the h-balance is verified, not assumed."""
    coeffs = coeffs if coeffs is not None else sol.coeffs
    if seed.dimension != 1:
        raise BalanceError("lens_apply needs a one-dimensional seed; use transform_2d")
    _check_target(sol, seed, coeffs)
    lam = _check_balance(coeffs, sol, seed, coeffs.s, tol)
    fns = {k: getattr(sol, k) for k in ("alpha", "beta", "gamma", "delta", "eps", "kappa", "mu")}

    def psi(t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        v = _by_time(fns, t)
        with np.errstate(divide="ignore", invalid="ignore"):
            pref = 1.0 / np.sqrt(np.abs(v["mu"]))
            phase = v["alpha"] * x * x + v["delta"] * x + v["kappa"]
            return pref * np.exp(1j * phase) * seed.u(v["gamma"], v["beta"] * x + v["eps"])

    chain = {"transform": "lens_1d", "phase": sol.kind, "seed": seed.kind, "seed_params": dict(seed.params),
             "l0": seed.l0, "lam": lam}
    return ExactSolution(psi, coeffs, sol.domain, 1, chain, sol, seed)


def lens_invert(exact: ExactSolution, t, xi):
    """Recover ``u(gamma(t), xi)`` from ``psi`` by undoing the 1D lens."""
    sol = exact.phase
    t, xi = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(xi, dtype=float))
    v = _by_time({k: getattr(sol, k) for k in ("alpha", "beta", "delta", "eps", "kappa", "mu")}, t)
    x = (xi - v["eps"]) / v["beta"]
    phase = v["alpha"] * x * x + v["delta"] * x + v["kappa"]
    return exact.psi(t, x) * np.sqrt(np.abs(v["mu"])) * np.exp(-1j * phase)


def plane_wave(sol: PhaseSolution, coeffs: CoefficientSet | None = None, y: float = 0.0) -> ExactSolution:
    """``mu^{-1/2} exp(i S_y)`` with the nonlinear self-phase folded into kappa.

    ``S_y = alpha x^2 + beta x y + l0 gamma y^2 + delta x + eps y + kappa``
    where kappa includes ``-int h/mu^s``. Any ``h(t)`` is allowed because
    ``|psi|`` does not depend on x.
    """
    coeffs = coeffs if coeffs is not None else sol.coeffs
    kap = kappa_nonlinear(sol, coeffs)
    l0 = sol.params.l0
    fns = {k: getattr(sol, k) for k in ("alpha", "beta", "gamma", "delta", "eps", "mu")}
    fns["kappa"] = kap

    def psi(t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        v = _by_time(fns, t)
        S = (v["alpha"] * x * x + v["beta"] * x * y + l0 * v["gamma"] * y * y + v["delta"] * x
             + v["eps"] * y + v["kappa"])
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.exp(1j * S) / np.sqrt(np.abs(v["mu"]))

    chain = {"transform": "plane_wave", "phase": sol.kind, "y": y}
    return ExactSolution(psi, coeffs, sol.domain, 1, chain, sol.with_kappa(kap))


def soliton_assemble(sol: PhaseSolution, profile: ProfileSolution, y: float = 0.0,
                     coeffs: CoefficientSet | None = None) -> ExactSolution:
    """Ermakov soliton ``F(beta x + 2 gamma y + eps)/sqrt(mu) exp(i S_y)``.

    ``S_y = alpha x^2 + beta x y + gamma y^2 + delta x + eps y + kappa + xi0 (gamma - gamma(0))``.
    Without ``coeffs`` the balanced coefficient set is used.
    """
    if sol.kind != "ermakov":
        raise BalanceError("soliton_assemble needs an Ermakov phase solution")
    xi0, h0 = sol.extras["xi0"], sol.extras["h0"]
    if abs(profile.xi0 - xi0) > 1e-12 or abs(profile.h0 - h0) > 1e-12:
        raise BalanceError(f"profile constants (xi0={profile.xi0}, h0={profile.h0}) do not match "
                           f"the phase solution (xi0={xi0}, h0={h0})")
    if coeffs is None:
        coeffs = balanced_coefficients(sol.coeffs, sol)
    g0 = sol.params.gamma0
    fns = {k: getattr(sol, k) for k in ("alpha", "beta", "gamma", "delta", "eps", "kappa", "mu")}

    def psi(t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        v = _by_time(fns, t)
        z = v["beta"] * x + 2 * v["gamma"] * y + v["eps"]
        S = (v["alpha"] * x * x + v["beta"] * x * y + v["gamma"] * y * y + v["delta"] * x + v["eps"] * y
             + v["kappa"] + xi0 * (v["gamma"] - g0))
        return profile.F(z) / np.sqrt(v["mu"]) * np.exp(1j * S)

    chain = {"transform": "ermakov_soliton", "c0": sol.c0, "xi0": xi0, "h0": h0, "C0": profile.C0,
             "profile": profile.regime, "y": y}
    return ExactSolution(psi, coeffs, sol.domain, 1, chain, sol)


def riccati_pair_2d(coeffs: CoefficientSet, params_x: RiccatiParameters, params_y: RiccatiParameters,
                    t_max: float, closed_forms=None):
    """Phase solutions for the x and y directions of a 2D equation.

    Both share the basis (hence alpha, beta, gamma, mu); the x solution is
    forced by ``f, g`` and the y solution by ``f2, g2``.
    """
    cx = coeffs.with_(dimension=1)
    cy = coeffs.with_(f=coeffs.f2, g=coeffs.g2, dimension=1)
    sx = riccati_multiparameter(riccati_kernel(solve_basis(cx, t_max, closed_forms=closed_forms)), params_x)
    sy = riccati_multiparameter(riccati_kernel(solve_basis(cy, t_max, closed_forms=closed_forms)), params_y)
    return sx, sy


def transform_2d(sol_x: PhaseSolution, seed: SeedSolution, sol_y: PhaseSolution | None = None,
                 coeffs: CoefficientSet | None = None, tol: float = 1e-8, domain=None) -> ExactSolution:
    """2D lens ``mu^{-1} exp(i(alpha r^2 + delta1 x + delta2 y + kappa1 + kappa2)) chi(gamma, xi, eta)``.

    ``xi = beta x + eps1`` and ``eta = beta y + eps2``; ``h = lam a beta^2 mu^(2s)``
    is verified. The kappa of the y solution is added without its own ``G``
    shift so that ``G`` is counted once.
    """
    sol_y = sol_y if sol_y is not None else sol_x
    coeffs = coeffs if coeffs is not None else sol_x.coeffs.with_(dimension=2)
    if seed.dimension != 2:
        raise BalanceError("transform_2d needs a two-dimensional seed")
    _check_target(sol_x, seed, coeffs)
    lam = _check_balance(coeffs, sol_x, seed, 2 * coeffs.s, tol)
    fns = {k: getattr(sol_x, k) for k in ("alpha", "beta", "gamma", "delta", "eps", "kappa", "mu")}
    fns.update({"delta2": sol_y.delta, "eps2": sol_y.eps, "kappa2": sol_y.kappa})
    g_shift = None
    if not coeffs.is_zero("G"):
        from .riccati import antiderivative

        g_shift = antiderivative(coeffs.G, sol_x.domain[1])
        fns["gshift"] = g_shift

    def psi(t, x, y):
        t, x, y = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (t, x, y)))
        v = _by_time(fns, t)
        kap = v["kappa"] + v["kappa2"] + (v["gshift"] if g_shift is not None else 0.0)
        S = v["alpha"] * (x * x + y * y) + v["delta"] * x + v["delta2"] * y + kap
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.exp(1j * S) / np.abs(v["mu"]) * seed.u(v["gamma"], v["beta"] * x + v["eps"], v["beta"] * y + v["eps2"])

    chain = {"transform": "lens_2d", "seed": seed.kind, "l0": seed.l0, "lam": lam}
    return ExactSolution(psi, coeffs, domain or sol_x.domain, 2, chain, sol_x, seed)


def pseudoconformal_blowup(sol: PhaseSolution, Q: ProfileSolution | None = None, sol_y=None,
                           coeffs: CoefficientSet | None = None) -> ExactSolution:
    """2D lens applied to ``tau^{-1} Q(r/tau) exp(i r^2/(4 tau) - i/tau)``.

    With ``delta(0) = 0`` the modulus is
    ``2/(beta(0)^2 mu(0) |mu0|) Q(2|x|/(|beta(0)| |mu0|))`` for ``gamma(0)=0``,
    and the solution is singular at ``gamma(t) = 0``.
    """
    seed = build_seed("pseudoconformal", {"profile": Q} if Q is not None else {})
    lo = sol.domain[0]
    if np.isclose(sol.gamma(np.array(lo)), 0.0):
        lo = float(np.nextafter(lo, np.inf))
    out = transform_2d(sol, seed, sol_y, coeffs, domain=(lo, sol.domain[1]))
    return replace(out, chain={**out.chain, "transform": "pseudoconformal"})


# ---------------------------------------------------------------- the family

def family_closed_forms(params: Mapping, t):
    """Closed forms of the Ermakov family with base ``a = b = 1/2``, ``c0 = 1``.

    With ``m = 2 alpha(0) sin t + cos t`` and ``R^2 = m^2 + beta(0)^4 sin^2 t``
    every phase function is elementary; gamma uses the continuous branch of
    ``atan2(beta(0)^2 sin t, m)``.
    """
    p = {"mu0": 1.0, "alpha0": 0.0, "beta0": 1.0, "gamma0": 0.0, "delta0": 0.0, "eps0": 0.0, "kappa0": 0.0}
    p.update({k: float(v) for k, v in params.items() if k in p})
    t = np.asarray(t, dtype=float)
    s, c = np.sin(t), np.cos(t)
    a0, b0, d0, e0 = p["alpha0"], p["beta0"], p["delta0"], p["eps0"]
    m = 2 * a0 * s + c
    dm = 2 * a0 * c - s
    R2 = m * m + b0**4 * s * s
    R = np.sqrt(R2)
    # continuous angle: sample from 0 to each t
    tt = np.linspace(0.0, max(float(np.max(t)), 0.0) + 1e-9, 20001)
    raw = np.unwrap(np.arctan2(b0**2 * np.sin(tt), 2 * a0 * np.sin(tt) + np.cos(tt)))
    principal = np.arctan2(b0**2 * s, m)
    guess = np.interp(t, tt, raw)
    theta = principal + 2 * np.pi * np.round((guess - principal) / (2 * np.pi))
    return {
        "mu": p["mu0"] * R,
        "alpha": (m * dm + b0**4 * s * c) / (2 * R2),
        "beta": b0 / R,
        "gamma": p["gamma0"] - theta / 2,
        "delta": (m * d0 + e0 * b0**3 * s) / R2,
        "eps": (e0 * m - b0 * d0 * s) / R,
        "kappa": p["kappa0"] + (-m * d0 * d0 * s - 2 * b0**3 * e0 * d0 * s * s + b0**2 * e0**2 * m * s) / (2 * R2),
    }


def _family_profile(h0, xi0=None, C0=None):
    if h0 < 0:
        xi0 = h0 / 2 if xi0 is None else xi0
        C0 = 0.0 if C0 is None else C0
    elif h0 > 0:
        xi0 = h0 if xi0 is None else xi0
        C0 = xi0 * xi0 / (2 * h0) if C0 is None else C0
    else:
        raise ValueError("h0 must be nonzero for the soliton family")
    return elliptic_profile(xi0, h0, C0)


def family_solution(params: Mapping, t_max: float = 2 * np.pi):
    """Coefficient set and soliton ``psi_y`` of the Ermakov family.

    ``params`` holds ``h0, mu0, alpha0, beta0, gamma0, delta0, eps0, kappa0``,
    the translation ``y`` and optionally ``xi0, C0`` (defaults give unit
    amplitude sech for ``h0 < 0`` and tanh for ``h0 > 0``). The equation is

        i psi_t = -psi_xx/2 + (1 - beta^4)/2 x^2 psi - beta^3 eps x psi
                  - (beta^2 eps^2/2) psi + (h0/2) beta^2 mu |psi|^2 psi.
    """
    h0 = float(params["h0"])
    y = float(params.get("y", 0.0))
    prof = _family_profile(h0, params.get("xi0"), params.get("C0"))
    xi0 = prof.xi0
    g0 = float(params.get("gamma0", 0.0))

    def cf(name):
        return lambda t: family_closed_forms(params, t)[name]

    a = 0.5

    def b(t):
        return 0.5 - 0.5 * cf("beta")(t) ** 4

    def f(t):
        v = family_closed_forms(params, t)
        return v["beta"] ** 3 * v["eps"]

    def G(t):
        v = family_closed_forms(params, t)
        return -0.5 * v["beta"] ** 2 * v["eps"] ** 2

    def h(t):
        v = family_closed_forms(params, t)
        return 0.5 * h0 * v["beta"] ** 2 * v["mu"]

    coeffs = CoefficientSet(a=a, b=b, f=f, G=G, h=h)

    def psi(t, x):
        t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
        tu, inv = np.unique(t, return_inverse=True)
        vals = family_closed_forms(params, tu)
        v = {k: vals[k][inv].reshape(t.shape) for k in vals}
        z = v["beta"] * x + 2 * v["gamma"] * y + v["eps"]
        S = (v["alpha"] * x * x + v["beta"] * x * y + v["gamma"] * y * y + v["delta"] * x + v["eps"] * y
             + v["kappa"] + xi0 * (v["gamma"] - g0))
        return prof.F(z) / np.sqrt(v["mu"]) * np.exp(1j * S)

    chain = {"transform": "family_closed_form", "params": {k: float(v) for k, v in params.items()},
             "xi0": xi0, "C0": prof.C0, "profile": prof.regime}
    return coeffs, ExactSolution(psi, coeffs, (0.0, float(t_max)), 1, chain)


# ------------------------------------------------------ reference closed forms

def closed_form_solution(name: str, **p) -> ExactSolution:
    """Closed-form solutions of the worked scenarios, written out directly.

    ``g1`` (bending bright), ``g2`` (bending dark), ``Periodic1``,
    ``FastDecay``, ``Peregrine1`` and ``Peregrine2``. The Peregrine phases use
    ``exp(2 i A^2 t)``.
    """
    from .coeffs import load_scenario

    if name == "g1":
        v, d0, e0, k0, g0 = (float(p.get(k, dflt)) for k, dflt in
                             (("v", 1.0), ("delta0", 1 / 6), ("eps0", -1 / 6), ("kappa0", 0.0), ("gamma0", 0.0)))
        sc = load_scenario("bending_bright")

        def psi(t, x):
            t, x = np.asarray(t, dtype=float), np.asarray(x, dtype=float)
            coth, csch, sech = 1 / np.tanh(t), 1 / np.sinh(t), 1 / np.cosh(t)
            den = 2 + coth
            amp = np.sqrt(v * coth / den) / np.cosh(np.sqrt(v) * ((x * csch - d0) / den + e0))
            ph = (2 * x * x * csch * sech + 2 * d0 * x * csch - d0 * d0 + v) / (4 + 2 * coth)
            return amp * np.exp(1j * ph) * np.exp(1j * (k0 - v * g0) - np.sinh(t))

        return ExactSolution(psi, sc.coefficients, (0.0, np.inf), 1, {"closed_form": "g1", **p})

    if name == "g2":
        A, d0, e0, k0, g0 = (float(p.get(k, dflt)) for k, dflt in
                             (("A", 2.0), ("delta0", 0.0), ("eps0", 0.0), ("kappa0", 0.0), ("gamma0", 0.0)))
        sc = load_scenario("bending_dark")

        def psi(t, x):
            t, x = np.asarray(t, dtype=float), np.asarray(x, dtype=float)
            csch = 1 / np.sinh(t)
            amp = A / np.sqrt(1 + np.sinh(t)) * np.tanh(A * ((2 * x * csch - 2 * d0) / (csch + 1) + e0))
            ph = (-x * x + 2 * d0 * x * csch - d0 * d0 - 8 * A * A) / (2 + 2 * csch)
            return amp * np.exp(1j * ph) * np.exp(1j * (k0 + 2 * A * A * g0))

        return ExactSolution(psi, sc.coefficients, (0.0, np.inf), 1, {"closed_form": "g2", **p})

    if name in ("Periodic1", "FastDecay"):
        v, k0 = float(p.get("v", -2.0)), float(p.get("kappa0", 0.0))
        sc = load_scenario("sch1" if name == "Periodic1" else "sch1_fastdecay")

        def psi(t, x):
            t, x = np.asarray(t, dtype=float), np.asarray(x, dtype=float)
            env = 1.5 * (np.cos(t) - 1) if name == "Periodic1" else -t * t
            return (np.sqrt(-2 * v / 3) / np.cosh(np.sqrt(-v) * x)
                    * np.exp(env + 1j * (x * x * np.sin(t) / 4 + k0 - v * t)))

        return ExactSolution(psi, sc.coefficients, (-np.inf, np.inf), 1, {"closed_form": name, **p})

    if name in ("Peregrine1", "Peregrine2"):
        A, k0 = float(p.get("A", 0.5)), float(p.get("kappa0", 0.0))
        sc = load_scenario("sch2" if name == "Peregrine1" else "sch2_perturbed")

        def psi(t, x):
            t, x = np.asarray(t, dtype=float), np.asarray(x, dtype=float)
            A2 = A * A
            rat = (3 + 16j * A2 * t - 16 * A2 * A2 * t * t - 4 * A2 * x * x) / (1 + 16 * A2 * A2 * t * t + 4 * A2 * x * x)
            kap = k0 + np.exp(2 * t * t) * (2 * t - np.sqrt(2) * dawson(np.sqrt(2) * t)) / 8
            ph = np.exp(1j * (t * x * x / 2 + t * np.exp(t * t) * x + kap))
            if name == "Peregrine1":
                return ph * (A / 2) * np.exp(2j * A2 * t) * rat / np.cosh(t)
            return A * ph * rat * np.exp(2j * A2 * t + np.sin(t) ** 2)

        return ExactSolution(psi, sc.coefficients, (-np.inf, np.inf), 1, {"closed_form": name, **p})

    raise ValueError(f"unknown closed form {name!r}")


# ------------------------------------------------------------- scenarios

_PARAM_KEYS = ("mu0", "alpha0", "beta0", "gamma0", "delta0", "eps0", "kappa0")


def solve_scenario(scenario: Scenario, overrides: Mapping | None = None, pad: float = 0.05):
    """Build ``(phase_solution, exact_solution)`` for a catalog scenario.

    ``overrides`` may replace phase parameters (``alpha0`` ...), ``l0``,
    ``c0``, seed parameters and ``y``.
    """
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    coeffs = scenario.coefficients
    phase = dict(scenario.phase)
    method = phase.get("method", "riccati")
    pparams = {**phase.get("params", {})}
    pparams.update({k: overrides[k] for k in _PARAM_KEYS if k in overrides})
    l0 = int(overrides.get("l0", coeffs.l0))
    if l0 != coeffs.l0:
        coeffs = coeffs.with_(l0=l0)
    seed_spec = dict(scenario.seed)
    seed_kind = seed_spec.get("kind")
    seed_params = {**seed_spec.get("params", {})}
    for k in list(seed_params):
        if k in overrides:
            seed_params[k] = overrides[k]
    y = float(overrides.get("y", seed_params.pop("y", 0.0)))
    t0, t1 = scenario.time_domain
    t_max = t1 + pad * (t1 - t0)

    if method == "alternative":
        sol = alternative_solve(coeffs, g0=float(pparams.get("g0", 0.0)), kappa0=float(pparams.get("kappa0", 0.0)),
                                mu0=float(pparams.get("mu0", 1.0)), l0=l0, t_max=t_max)
        seed = build_seed(seed_kind, seed_params)
        return sol, lens_apply(sol, seed, coeffs)

    if method == "ermakov":
        base = CoefficientSet.from_strings(phase.get("base", {"a": "0.5", "b": "0.5"}), l0=1)
        closed = {k[5:]: v for k, v in scenario.known_closed_forms.items() if k.startswith("base_")}
        kernel = riccati_kernel(solve_basis(base, t_max, closed_forms=closed or None))
        c0 = float(overrides.get("c0", pparams.get("c0", 1.0)))
        prof = elliptic_profile(seed_params["xi0"], seed_params["h0"], seed_params["C0"])
        params = RiccatiParameters.from_mapping({k: pparams[k] for k in _PARAM_KEYS if k in pparams})
        sol = ermakov_multiparameter(kernel, params, c0=c0, xi0=prof.xi0, h0=prof.h0)
        exact = soliton_assemble(sol, prof, y=y)
        return sol, replace(exact, chain={**exact.chain, "scenario": scenario.name})

    params = RiccatiParameters.from_mapping({**{k: pparams[k] for k in _PARAM_KEYS if k in pparams}, "l0": l0})
    if coeffs.dimension == 2:
        sx, sy = riccati_pair_2d(coeffs, params, params, t_max,
                                 closed_forms=scenario.known_closed_forms or None)
        if seed_kind == "pseudoconformal":
            exact = pseudoconformal_blowup(sx, sol_y=sy, coeffs=coeffs)
        else:
            seed_params.setdefault("l0", l0)
            exact = transform_2d(sx, build_seed(seed_kind, seed_params), sy, coeffs)
        return sx, replace(exact, chain={**exact.chain, "scenario": scenario.name})

    basis = solve_basis(coeffs, t_max, closed_forms=scenario.known_closed_forms or None)
    sol = riccati_multiparameter(riccati_kernel(basis), params)
    from .blowup import predict_blowup

    report = predict_blowup(sol)
    t_star = report.t_star if report is not None and report.method != "inconclusive" else None
    if t_star is not None:
        sol = replace(sol, domain=(0.0, t_star * (1 - 1e-4)))
    if seed_kind == "plane_wave":
        exact = plane_wave(sol, coeffs, y=y)
    else:
        if seed_kind in ("bright", "dark", "ground_state_1d", "cn_wave", "sn_wave", "custom_profile"):
            seed_params.setdefault("l0", l0)
        exact = lens_apply(sol, build_seed(seed_kind, seed_params), coeffs)
    exact = replace(exact, predicted_blowup=t_star, chain={**exact.chain, "scenario": scenario.name})
    return sol, exact
