"""Finite-time blow-up: roots of the regularized mu and norm traces."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

__all__ = ["BlowupReport", "predict_blowup", "inverse_gamma0", "amplitude_envelope", "lens_envelope"]


@dataclass(frozen=True)
class BlowupReport:
    t_star: float
    bracket: tuple[float, float]
    method: str
    norm_trace: tuple | None = None
    p: float | None = None
    mu_at_root: float | None = None

    def to_dict(self):
        d = asdict(self)
        d["bracket"] = list(self.bracket)
        if self.norm_trace is not None:
            d["norm_trace"] = [list(map(float, row)) for row in self.norm_trace]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def predict_blowup(sol, n: int = 4001, rtol: float = 1e-12):
    """First positive root of mu, or None when mu keeps its sign on the domain.

    mu is the regularized ``mu(0) (r mu0 + mu1)`` and is finite at t = 0, so
    the scan starts there. A root in the last scan cell is reported with
    ``method="inconclusive"``.
    """
    if sol.kind == "alternative" or (sol.kind == "ermakov" and sol.c0 > 0):
        return None
    t0, t1 = sol.domain
    ts = np.linspace(t0, t1, n)
    mu = np.asarray(sol.mu(ts), dtype=float)
    sign0 = np.sign(mu[0])
    flips = np.nonzero(np.sign(mu[1:]) != sign0)[0]
    if flips.size == 0:
        return None
    j = int(flips[0])
    lo, hi = float(ts[j]), float(ts[j + 1])
    if mu[j + 1] == 0.0:
        root = hi
    else:
        root = brentq(lambda t: float(sol.mu(np.array(t))), lo, hi, xtol=1e-15, rtol=rtol, maxiter=200)
    method = "inconclusive" if j + 1 == n - 1 else "root_of_mu"
    return BlowupReport(t_star=float(root), bracket=(lo, hi), method=method,
                        mu_at_root=float(sol.mu(np.array(root))))


def inverse_gamma0(kernel, alpha0: float, t_max: float | None = None, n: int = 4001):
    """Solve ``gamma0(t) = -alpha(0)`` directly (valid while mu0 > 0)."""
    t_max = kernel.t_max if t_max is None else t_max
    ts = np.linspace(0.0, t_max, n)[1:]
    v = kernel.gamma0(ts) + alpha0
    flips = np.nonzero(np.sign(v[1:]) != np.sign(v[:-1]))[0]
    for j in flips:
        lo, hi = ts[j], ts[j + 1]
        if np.isfinite(v[j]) and np.isfinite(v[j + 1]) and abs(v[j]) < 1e3 and abs(v[j + 1]) < 1e3:
            return float(brentq(lambda t: float(kernel.gamma0(np.array(t))) + alpha0, lo, hi, xtol=1e-15, rtol=1e-13))
    return None


def _norm(values, x, p):
    a = np.abs(values)
    if np.isinf(p):
        return float(np.max(a))
    return float(simpson(a**p, x=x) ** (1.0 / p))


def amplitude_envelope(exact, p, times, x=None):
    """``||psi(t)||_p`` over an x-grid for each time (1D)."""
    x = np.linspace(-20.0, 20.0, 8001) if x is None else np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("empty x-grid")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    return np.array([_norm(exact.psi(np.full_like(x, t), x), x, p) for t in times])


def lens_envelope(exact, p, times, xi=None):
    """Analytic trace ``||u(gamma)||_p mu^{-1/2} |beta|^{-1/p}`` for a lens solution."""
    xi = np.linspace(-40.0, 40.0, 16001) if xi is None else np.asarray(xi, dtype=float)
    sol, seed = exact.phase, exact.seed
    times = np.atleast_1d(np.asarray(times, dtype=float))
    out = []
    for t in times:
        tau = float(sol.gamma(np.array(t)))
        un = _norm(seed.u(np.full_like(xi, tau), xi), xi, p)
        mu, be = float(sol.mu(np.array(t))), float(sol.beta(np.array(t)))
        scale = abs(mu) ** -0.5 * (1.0 if np.isinf(p) else abs(be) ** (-1.0 / p))
        out.append(un * scale)
    return np.array(out)
