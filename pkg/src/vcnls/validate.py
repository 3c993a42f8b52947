"""Numerical certification of exact solutions and phase systems.

PDE residuals use 8th-order centred differences; the step along each axis is
set from the solution's own variation scale so that truncation stays near
1e-10 relative. Residuals are divided by ``max(1, max|psi|)`` on the grid.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson
from scipy.ndimage import maximum_filter1d

from .coeffs import CoefficientSet

__all__ = [
    "GridError",
    "GridSpec",
    "ResidualReport",
    "central_derivative",
    "mass_law_check",
    "parse_grid",
    "pde_residual",
    "phase_derivative",
    "system_residual",
]

# 8th-order centred stencils, offsets 1..4
_D1 = np.array([4 / 5, -1 / 5, 4 / 105, -1 / 280])
_D2 = np.array([8 / 5, -1 / 5, 8 / 315, -1 / 560])
_D2_CENTER = -205 / 72


class GridError(ValueError):
    pass


def central_derivative(fn: Callable, t, h: float = 1e-3):
    """8th-order centred first derivative of a scalar function."""
    t = np.asarray(t, dtype=float)
    acc = 0.0
    for k, w in enumerate(_D1, start=1):
        acc = acc + w * (fn(t + k * h) - fn(t - k * h))
    return acc / h


def _second(fn: Callable, t, h: float):
    acc = _D2_CENTER * fn(t)
    for k, w in enumerate(_D2, start=1):
        acc = acc + w * (fn(t + k * h) + fn(t - k * h))
    return acc / (h * h)


@dataclass(frozen=True)
class GridSpec:
    t0: float
    t1: float
    nt: int
    x0: float
    x1: float
    nx: int
    y0: float | None = None
    y1: float | None = None
    ny: int | None = None

    def axes(self):
        t = np.linspace(self.t0, self.t1, self.nt)
        x = np.linspace(self.x0, self.x1, self.nx)
        if self.ny is None:
            return t, x
        return t, x, np.linspace(self.y0, self.y1, self.ny)


def parse_grid(text: str) -> GridSpec:
    """Parse ``"t0:t1:nt,x0:x1:nx[,y0:y1:ny]"``."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3):
        raise ValueError("grid must look like 't0:t1:nt,x0:x1:nx[,y0:y1:ny]'")
    vals = []
    for part in parts:
        items = part.split(":")
        if len(items) != 3:
            raise ValueError(f"bad grid axis {part!r}")
        lo, hi, n = float(items[0]), float(items[1]), int(items[2])
        if not hi > lo or n < 2:
            raise ValueError(f"bad grid axis {part!r}")
        vals.extend([lo, hi, n])
    return GridSpec(*vals)


@dataclass
class ResidualReport:
    max_abs: float
    rms: float
    grid: dict
    worst_point: tuple
    passed: bool
    threshold: float
    details: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        d["worst_point"] = [float(v) for v in self.worst_point]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=float)


def _scale_step(psi_axis: Callable, pts, base: float, span: float):
    """Step from the local wavenumber weighted by amplitude.

    With ``M`` the running maximum of ``|psi|`` over nearby probe points (so
    isolated zeros do not register as short scales) the wavenumber is
    ``k = max(|psi'|/M, sqrt(|psi''|/M))``. Truncation scales like
    ``M (k h)^8``, hence ``h_i = 0.025 (amp/M_i)^(1/8) / k_i``; the small
    constant covers the factorial growth of high derivatives of analytic
    profiles.
    """
    eps = 1e-4 * max(1.0, span) / max(1, pts.size)
    vals = psi_axis(pts)
    up, dn = psi_axis(pts + eps), psi_axis(pts - eps)
    d1 = np.abs(up - dn) / (2 * eps)
    d2 = np.abs(up - 2 * vals + dn) / (eps * eps)
    M = maximum_filter1d(np.abs(vals), size=9, axis=-1, mode="nearest")
    amp = float(np.max(M))
    if not np.isfinite(amp) or amp == 0.0:
        return base
    keep = M > 1e-14 * amp
    k = np.maximum(d1[keep] / M[keep], np.sqrt(d2[keep] / M[keep]))
    cand = 0.025 * (amp / M[keep]) ** 0.125 / np.maximum(k, 1e-12)
    return float(min(base, np.min(cand)))


def pde_residual(exact, coeffs: CoefficientSet | None = None, grid: GridSpec | str | None = None,
                 threshold: float = 1e-6, h: float | None = None) -> ResidualReport:
    """Residual of ``psi`` in the variable-coefficient equation.

    In one dimension

        R = i psi_t + a psi_xx - (b x^2 - f x + G) psi + i c x psi_x + i d psi
            - i g psi_x - h |psi|^(2s) psi

    and in two dimensions the Laplacian, ``x.grad`` drift and a ``2d`` gain
    term take their places. ``exact`` needs ``psi(t, x[, y])`` and ``domain``.
    """
    coeffs = coeffs if coeffs is not None else exact.coeffs
    if isinstance(grid, str):
        grid = parse_grid(grid)
    if grid is None:
        raise GridError("a grid is required")
    dim = 2 if grid.ny is not None else 1
    axes = grid.axes()
    lo, hi = exact.domain
    tt = axes[0]
    ts_probe = np.linspace(grid.t0, grid.t1, 21)
    span_x = grid.x1 - grid.x0
    xs_probe = np.linspace(grid.x0, grid.x1, 801)
    if dim == 1:
        T, X = np.meshgrid(axes[0], axes[1], indexing="ij")
        mid_x = np.linspace(grid.x0, grid.x1, 41)
        probe_t = lambda s: exact.psi(s[:, None], mid_x[None, :])
        probe_x = lambda s: exact.psi(ts_probe[:, None], s[None, :])
    else:
        T, X, Y = np.meshgrid(*axes, indexing="ij")
        mid_x = np.linspace(grid.x0, grid.x1, 21)
        probe_t = lambda s: exact.psi(s[:, None], mid_x[None, :], 0.5 * (grid.y0 + grid.y1))
        probe_x = lambda s: exact.psi(ts_probe[:, None], s[None, :], 0.5 * (grid.y0 + grid.y1))
    if tt[0] <= lo or tt[-1] >= hi:
        raise GridError(f"grid time range [{tt[0]}, {tt[-1]}] must lie inside the solution domain ({lo}, {hi})")
    with np.errstate(all="ignore"):
        ht = h or _scale_step(probe_t, ts_probe, 1e-2, grid.t1 - grid.t0)
        hx = h or _scale_step(probe_x, xs_probe, 1e-2, span_x)
    reach = min(tt[0] - lo, hi - tt[-1]) / 4
    if ht > reach:
        if h is not None:
            raise GridError(f"stencil reach {4 * h:.2e} leaves the solution domain ({lo}, {hi})")
        ht = reach

    with np.errstate(all="ignore"):
        if dim == 1:
            psi = exact.psi(T, X)
            pt = central_derivative(lambda s: exact.psi(s, X), T, ht)
            px = central_derivative(lambda s: exact.psi(T, s), X, hx)
            pxx = _second(lambda s: exact.psi(T, s), X, hx)
            t = T
            a, b, c, d, f, g, hh, G = (getattr(coeffs, n)(t) for n in ("a", "b", "c", "d", "f", "g", "h", "G"))
            R = (1j * pt + a * pxx - (b * X**2 - f * X + G) * psi + 1j * c * X * px + 1j * d * psi
                 - 1j * g * px - hh * np.abs(psi) ** (2 * coeffs.s) * psi)
        else:
            psi = exact.psi(T, X, Y)
            pt = central_derivative(lambda s: exact.psi(s, X, Y), T, ht)
            px = central_derivative(lambda s: exact.psi(T, s, Y), X, hx)
            py = central_derivative(lambda s: exact.psi(T, X, s), Y, hx)
            lap = _second(lambda s: exact.psi(T, s, Y), X, hx) + _second(lambda s: exact.psi(T, X, s), Y, hx)
            t = T
            a, b, c, d, f, g, hh, G, f2, g2 = (getattr(coeffs, n)(t) for n in
                                                ("a", "b", "c", "d", "f", "g", "h", "G", "f2", "g2"))
            R = (1j * pt + a * lap - (b * (X**2 + Y**2) - f * X - f2 * Y + G) * psi
                 + 1j * c * (X * px + Y * py) + 2j * d * psi
                 - 1j * (g * px + g2 * py) - hh * np.abs(psi) ** (2 * coeffs.s) * psi)

    if not np.all(np.isfinite(R)):
        bad = np.argwhere(~np.isfinite(R))[0]
        raise GridError(f"non-finite residual at grid index {tuple(bad)}; grid touches a singularity")
    norm = max(1.0, float(np.max(np.abs(psi))))
    Rn = np.abs(R) / norm
    idx = np.unravel_index(np.argmax(Rn), Rn.shape)
    worst = tuple(float(arr[idx]) for arr in ((T, X) if dim == 1 else (T, X, Y)))
    max_abs = float(Rn[idx])
    rms = float(np.sqrt(np.mean(Rn**2)))
    desc = {"t": [grid.t0, grid.t1, grid.nt], "x": [grid.x0, grid.x1, grid.nx], "stencil_order": 8,
            "ht": ht, "hx": hx, "normalisation": norm}
    if dim == 2:
        desc["y"] = [grid.y0, grid.y1, grid.ny]
    return ResidualReport(max_abs, rms, desc, worst, bool(max_abs <= threshold), threshold)


def phase_derivative(fn: Callable, t, h: float = 1e-3):
    """6th-order centred derivative used for phase-system residuals."""
    t = np.asarray(t, dtype=float)
    return (45 * (fn(t + h) - fn(t - h)) - 9 * (fn(t + 2 * h) - fn(t - 2 * h)) + (fn(t + 3 * h) - fn(t - 3 * h))) / (60 * h)


_SYSTEM_NAMES = ("alpha", "beta", "gamma", "delta", "eps", "kappa")


def system_residual(sol, coeffs: CoefficientSet | None = None, threshold: float = 1e-7,
                    t: Sequence[float] | None = None, n: int = 500, h: float = 1e-3,
                    relative: bool = True) -> ResidualReport:
    """Residuals of the six phase ODEs along ``t``.

    Riccati-type solutions are checked against the Riccati system with the
    ``l0`` of their parameters (``kappa`` includes the ``-G`` shift), Ermakov
    ones against the Ermakov system with ``f + 2 alpha g`` in the delta
    equation. Each residual is scaled by ``max(1, |terms|)`` when ``relative``.
    """
    from .ermakov import ermakov_residual_terms

    coeffs = coeffs if coeffs is not None else sol.coeffs
    lo, hi = sol.domain
    if t is None:
        margin = 4 * h + 1e-3 * (hi - lo)
        t = np.linspace(lo + margin, hi - margin, n)
    t = np.asarray(t, dtype=float)
    if sol.kind == "ermakov":
        rhs = ermakov_residual_terms(coeffs, sol, t)
    else:
        a, b, c, f, g, G = (getattr(coeffs, k)(t) for k in ("a", "b", "c", "f", "g", "G"))
        al, be, de = sol.alpha(t), sol.beta(t), sol.delta(t)
        k = c + 4 * a * al
        rhs = (
            -b - 2 * c * al - 4 * a * al**2,
            -k * be,
            -sol.params.l0 * a * be**2,
            -k * de + f + 2 * al * g,
            (g - 2 * a * de) * be,
            g * de - a * de**2 - G,
        )
    worst_val, worst_eq, worst_t = -1.0, None, None
    per_eq = {}
    sq = []
    for name, r in zip(_SYSTEM_NAMES, rhs):
        lhs = phase_derivative(getattr(sol, name), t, h)
        res = np.abs(lhs - r)
        if relative:
            res = res / np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(r)))
        j = int(np.nanargmax(res)) if np.any(np.isfinite(res)) else 0
        per_eq[name] = float(res[j])
        sq.append(res)
        if not np.isfinite(res[j]) or res[j] > worst_val:
            worst_val, worst_eq, worst_t = float(res[j]), name, float(t[j])
    allres = np.concatenate(sq)
    rms = float(np.sqrt(np.nanmean(allres**2)))
    grid = {"t": [float(t[0]), float(t[-1]), int(t.size)], "stencil_order": 6, "h": h}
    passed = bool(np.isfinite(worst_val) and worst_val <= threshold)
    return ResidualReport(worst_val, rms, grid, (worst_t,), passed, threshold,
                          {"per_equation": per_eq, "worst_equation": worst_eq})


def mass_law_check(exact, coeffs: CoefficientSet | None = None, times: Sequence[float] = (),
                   x: np.ndarray | None = None, threshold: float = 1e-8) -> ResidualReport:
    """Compare ``||psi(t)||^2`` with ``||psi(t0)||^2 exp(int (c - 2d))``.

    Multiplying the equation by the conjugate field and integrating by parts
    gives ``d/dt ||psi||^2 = (c - 2d) ||psi||^2`` in one dimension; nothing
    else contributes because every other term is Hermitian.
    """
    from .riccati import antiderivative

    coeffs = coeffs if coeffs is not None else exact.coeffs
    times = np.asarray(times, dtype=float)
    if times.size < 2:
        raise ValueError("need at least two times")
    if x is None:
        x = np.linspace(-40, 40, 8001)
    t0 = float(times[0])
    rate = antiderivative(lambda s: coeffs.c(s) - 2 * coeffs.d(s), float(times[-1]), t0=t0)
    masses, edge = [], 0.0
    for t in times:
        v = np.abs(exact.psi(t, x)) ** 2
        peak = float(np.max(v))
        edge = max(edge, float(max(v[0], v[-1]) / peak) if peak > 0 else 0.0)
        masses.append(simpson(v, x=x))
    if edge > 1e-16:
        raise GridError(f"boundary mass too large (|psi|^2 edge ratio {edge:.2e}); the law needs decay")
    masses = np.array(masses)
    predicted = masses[0] * np.exp(rate(times))
    dev = np.abs(masses / predicted - 1)
    j = int(np.argmax(dev))
    return ResidualReport(float(dev[j]), float(np.sqrt(np.mean(dev**2))),
                          {"t": [float(times[0]), float(times[-1]), int(times.size)], "x": [float(x[0]), float(x[-1]), int(x.size)]},
                          (float(times[j]),), bool(dev[j] <= threshold), threshold,
                          {"mass": masses.tolist(), "predicted": predicted.tolist()})
