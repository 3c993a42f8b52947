"""Direct integration of the 1D variable-coefficient equation.

    psi_t = i a psi_xx - i (b x^2 - f x + G) psi - c x psi_x - d psi + g psi_x
            - i h |psi|^(2s) psi

Two schemes: method of lines (4th-order finite differences or Fourier
derivatives, adaptive DOP853 in time) and Strang split-step Fourier with
step-doubling error control. Boundaries are periodic, Dirichlet with an
absorbing layer, or ``exact`` (ghost values taken from an exact solution).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import simpson, solve_ivp

from .coeffs import CoefficientSet

__all__ = ["SchemeError", "Trajectory", "make_grid", "integrate", "compare_to_exact", "convergence_table"]


class SchemeError(ValueError):
    pass


@dataclass
class Trajectory:
    x: np.ndarray
    times: np.ndarray
    fields: np.ndarray
    t_stop: float
    stop_reason: str
    scheme: str
    space: str
    boundary: str
    tol: float
    stats: dict = field(default_factory=dict)

    def mass(self):
        if self.boundary == "periodic":
            dx = self.x[1] - self.x[0]
            return np.array([np.sum(np.abs(f) ** 2) * dx for f in self.fields])
        return np.array([simpson(np.abs(f) ** 2, x=self.x) for f in self.fields])

    def manifest(self) -> dict:
        digest = hashlib.sha256(np.ascontiguousarray(self.fields).tobytes()).hexdigest()
        return {
            "scheme": self.scheme, "space": self.space, "boundary": self.boundary, "tol": self.tol,
            "N": int(self.x.size), "x_range": [float(self.x[0]), float(self.x[-1])],
            "snapshots": [float(t) for t in self.times], "t_stop": float(self.t_stop),
            "stop_reason": self.stop_reason, "stats": self.stats, "sha256": digest,
        }

    def to_csv(self, path) -> Path:
        path = Path(path)
        T, X = np.meshgrid(self.times, self.x, indexing="ij")
        data = np.column_stack([T.ravel(), X.ravel(), self.fields.real.ravel(), self.fields.imag.ravel()])
        np.savetxt(path, data, delimiter=",", fmt="%.17g", header="t,x,re,im", comments="")
        return path


def make_grid(half_width: float, n: int, periodic: bool):
    """Uniform grid on ``[-L, L)`` (periodic) or ``[-L, L]`` (Dirichlet)."""
    if periodic:
        return -half_width + 2 * half_width * np.arange(n) / n
    return np.linspace(-half_width, half_width, n)


def _default_half_width(exact, t0, floor=1e-10):
    xs = np.linspace(0.0, 200.0, 4001)
    vals = np.abs(exact.psi(np.full_like(xs, t0), xs)) + np.abs(exact.psi(np.full_like(xs, t0), -xs))
    peak = float(np.max(vals))
    small = np.nonzero(vals < floor * peak)[0]
    return float(xs[small[0]]) if small.size else 20.0


class _Derivatives:
    """First and second x-derivatives for a fixed grid and boundary rule."""

    def __init__(self, x, space, boundary, ghost=None):
        self.x, self.space, self.boundary, self.ghost = x, space, boundary, ghost
        self.dx = x[1] - x[0]
        if space == "spectral":
            if boundary != "periodic":
                raise SchemeError("spectral derivatives need periodic boundaries")
            n = x.size
            self.k = 2 * np.pi * np.fft.fftfreq(n, d=self.dx)

    def __call__(self, psi, t):
        if self.space == "spectral":
            ph = np.fft.fft(psi)
            return np.fft.ifft(1j * self.k * ph), np.fft.ifft(-self.k**2 * ph)
        if self.boundary == "periodic":
            p = np.concatenate([psi[-2:], psi, psi[:2]])
        elif self.boundary == "exact":
            left, right = self.ghost(t)
            p = np.concatenate([left, psi, right])
        else:
            p = np.concatenate([np.zeros(2, complex), psi, np.zeros(2, complex)])
        dx = self.dx
        d1 = (-p[4:] + 8 * p[3:-1] - 8 * p[1:-3] + p[:-4]) / (12 * dx)
        d2 = (-p[4:] + 16 * p[3:-1] - 30 * p[2:-2] + 16 * p[1:-3] - p[:-4]) / (12 * dx * dx)
        return d1, d2


def _absorber(x, fraction, strength):
    L = np.max(np.abs(x))
    inner = (1 - fraction) * L
    ramp = np.clip((np.abs(x) - inner) / max(fraction * L, 1e-300), 0.0, 1.0)
    return strength * ramp**2


def _coeff_values(coeffs, t):
    return {n: float(np.asarray(getattr(coeffs, n)(t))) for n in ("a", "b", "c", "d", "f", "g", "h", "G")}


def _under_resolved(psi, frac=1e-6, window=None):
    """More than ``frac`` of the spectral energy in the top third of wavenumbers.

    ``window`` tapers non-periodic fields so that the boundary does not
    register as a jump.
    """
    if window is not None:
        psi = psi[window[0]] * window[1]
    spec = np.abs(np.fft.fft(psi)) ** 2
    n = psi.size
    k = np.abs(np.fft.fftfreq(n))
    total = float(np.sum(spec))
    if total == 0.0:
        return False
    return float(np.sum(spec[k > 1 / 3])) / total > frac


def integrate(coeffs: CoefficientSet, initial, t0: float, t1: float, scheme: str = "mol",
              x=None, n: int = 512, half_width: float | None = None, times=None, tol: float = 1e-10,
              space: str = "fd4", boundary: str = "dirichlet", exact=None, absorb: float = 0.1,
              blowup_factor: float = 1e6, resolution_check: bool = True) -> Trajectory:
    """Integrate from ``t0`` to ``t1`` (either direction) and return snapshots.

    ``initial`` is an exact solution (sampled at ``t0``) or raw samples on
    ``x``. The run stops early when ``max|psi|`` exceeds ``blowup_factor``
    times its initial value, when the step size underflows, or when more than
    1e-6 of the spectral energy sits in the top third of wavenumbers.
    """
    if coeffs.dimension != 1:
        raise SchemeError("the simulator integrates one-dimensional equations")
    if scheme not in ("mol", "split_step"):
        raise SchemeError(f"unknown scheme {scheme!r}")
    if scheme == "split_step":
        if not (coeffs.is_zero("c") and coeffs.is_zero("g")):
            raise SchemeError("split_step handles c = g = 0 only; use scheme='mol'")
        space, boundary = "spectral", "periodic"
    exact = exact if exact is not None else (initial if hasattr(initial, "psi") else None)
    if boundary == "exact" and exact is None:
        raise SchemeError("boundary='exact' needs an exact solution")
    periodic = boundary == "periodic"
    if x is None:
        if half_width is None:
            half_width = _default_half_width(exact, t0) if exact is not None else 20.0
            if boundary == "dirichlet":
                half_width /= 1 - absorb
        x = make_grid(half_width, n, periodic)
    x = np.asarray(x, dtype=float)
    if space == "spectral" and (x.size < 16 or x.size & (x.size - 1)):
        raise SchemeError("spectral mode needs N >= 16 and a power of two")
    psi0 = np.asarray(exact.psi(np.full_like(x, t0), x) if hasattr(initial, "psi") else initial, dtype=complex)
    if psi0.shape != x.shape:
        raise SchemeError("initial samples do not match the grid")
    times = np.array([t1], dtype=float) if times is None else np.asarray(times, dtype=float)

    ghost = None
    if boundary == "exact":
        dx = x[1] - x[0]
        gx = np.concatenate([x[0] - dx * np.array([2, 1]), x[-1] + dx * np.array([1, 2])])

        def ghost(t):
            v = exact.psi(np.full(4, t), gx)
            return v[:2], v[2:]

    sigma = _absorber(x, absorb, 2.0) if boundary == "dirichlet" and absorb > 0 else None
    start_peak = float(np.max(np.abs(psi0)))
    stats = {"rhs_evals": 0}
    win = None
    if not periodic:
        inner = np.abs(x) <= (1 - absorb) * np.max(np.abs(x)) if boundary == "dirichlet" else np.ones(x.size, bool)
        win = (inner, np.hanning(int(inner.sum())))

    if scheme == "mol":
        D = _Derivatives(x, space, boundary, ghost)

        def rhs(t, psi):
            stats["rhs_evals"] += 1
            cv = _coeff_values(coeffs, t)
            d1, d2 = D(psi, t)
            V = cv["b"] * x * x - cv["f"] * x + cv["G"]
            out = (1j * cv["a"] * d2 - 1j * V * psi - cv["c"] * x * d1 - cv["d"] * psi + cv["g"] * d1
                   - 1j * cv["h"] * np.abs(psi) ** (2 * coeffs.s) * psi)
            if sigma is not None:
                out = out - sigma * psi
            return out

        def blow(t, psi):
            return blowup_factor * start_peak - np.max(np.abs(psi))

        blow.terminal = True

        events = [blow]
        if resolution_check:
            def resolve(t, psi):
                return -1.0 if _under_resolved(psi, window=win) else 1.0

            resolve.terminal = True
            events.append(resolve)
        dx = x[1] - x[0]
        a_scale = max(abs(float(np.asarray(coeffs.a(t0)))), 1e-12)
        first = min(abs(t1 - t0), 0.05 * dx * dx / a_scale)
        with np.errstate(over="ignore", invalid="ignore"):
            res = solve_ivp(rhs, (t0, t1), psi0, method="DOP853", rtol=tol, atol=tol * max(start_peak, 1e-300),
                            t_eval=times, events=events, first_step=first)
        if res.status == 1:
            fired = [i for i, ev in enumerate(res.t_events) if ev.size]
            reason = "blowup" if fired and fired[0] == 0 else "under_resolved"
            t_stop = float(res.t_events[fired[0]][0])
        elif res.status == -1:
            reason, t_stop = "dt_underflow", float(res.t[-1]) if res.t.size else t0
        else:
            reason, t_stop = "completed", float(t1)
        y = np.asarray(res.y)
        fields = y.T if y.size else np.empty((0, x.size), complex)
        stats["rhs_evals"] = int(res.nfev)
        return Trajectory(x, res.t, fields, t_stop, reason, "mol", space, boundary, tol, stats)

    return _split_step(coeffs, x, psi0, t0, t1, times, tol, start_peak, blowup_factor, resolution_check, stats)


def _split_step(coeffs, x, psi0, t0, t1, times, tol, start_peak, blowup_factor, resolution_check, stats):
    n = x.size
    dx = x[1] - x[0]
    k2 = (2 * np.pi * np.fft.fftfreq(n, d=dx)) ** 2
    direction = 1.0 if t1 >= t0 else -1.0

    def half_local(psi, t, dt):
        # exact flow of -i V psi - d psi - i h |psi|^2s psi over dt/2 with frozen coefficients at t
        cv = _coeff_values(coeffs, t)
        V = cv["b"] * x * x - cv["f"] * x + cv["G"]
        amp2 = np.abs(psi) ** (2 * coeffs.s)
        decay = np.exp(-cv["d"] * dt / 2)
        if cv["d"] != 0 and coeffs.s != 0:
            # |psi|^2s decays as exp(-2 s d t) during the substep
            fac = (1 - np.exp(-2 * coeffs.s * cv["d"] * dt / 2)) / (2 * coeffs.s * cv["d"])
        else:
            fac = dt / 2
        return psi * decay * np.exp(-1j * (V * dt / 2 + cv["h"] * amp2 * fac))

    def step(psi, t, dt):
        stats["rhs_evals"] += 1
        p = half_local(psi, t + dt / 4, dt)
        a_mid = float(np.asarray(coeffs.a(t + dt / 2)))
        p = np.fft.ifft(np.exp(-1j * a_mid * k2 * dt) * np.fft.fft(p))
        return half_local(p, t + 3 * dt / 4, dt)

    t, psi = t0, psi0.copy()
    dt = direction * min(1e-3, abs(t1 - t0) / 10 or 1e-3)
    out_t, out_f = [], []
    queue = list(np.sort(times)[::int(direction)])
    reason = "completed"
    steps = 0
    while queue:
        target = queue[0]
        if (target - t) * direction <= 1e-15:
            out_t.append(t)
            out_f.append(psi.copy())
            queue.pop(0)
            continue
        dt = direction * min(abs(dt), abs(target - t))
        full = step(psi, t, dt)
        half = step(step(psi, t, dt / 2), t + dt / 2, dt / 2)
        err = float(np.max(np.abs(full - half))) / max(start_peak, 1e-300) / 3
        if err <= tol:
            t, psi = t + dt, half + (half - full) / 3
            steps += 1
            if not np.all(np.isfinite(psi)) or np.max(np.abs(psi)) > blowup_factor * start_peak:
                reason = "blowup"
                break
            if resolution_check and _under_resolved(psi):
                reason = "under_resolved"
                break
        fac = 0.9 * (tol / max(err, 1e-300)) ** (1 / 5)
        dt = dt * min(2.0, max(0.2, fac))
        if abs(dt) < 1e-14 * max(1.0, abs(t)):
            reason = "dt_underflow"
            break
    stats["steps"] = steps
    fields = np.array(out_f) if out_f else np.empty((0, n), complex)
    return Trajectory(x, np.array(out_t), fields, float(t), reason, "split_step", "spectral", "periodic", tol, stats)


def compare_to_exact(traj: Trajectory, exact, region=None):
    """Per-snapshot ``L2`` and ``Linf`` errors against ``exact``.

    ``region`` restricts the comparison to ``|x| <= region`` (for instance
    the interior of an absorbing layer).
    """
    x = traj.x
    keep = np.ones_like(x, dtype=bool) if region is None else np.abs(x) <= region
    rows = []
    for t, f in zip(traj.times, traj.fields):
        ex = exact.psi(np.full_like(x, t), x) if hasattr(exact, "psi") else np.asarray(exact)
        if np.shape(ex) != x.shape:
            raise SchemeError("exact samples do not match the grid")
        diff = (f - ex)[keep]
        rows.append({"t": float(t), "L2": float(np.sqrt(simpson(np.abs(diff) ** 2, x=x[keep]))),
                     "Linf": float(np.max(np.abs(diff)))})
    return rows


def convergence_table(run, ns, metric="L2"):
    """Errors over grid refinements and the observed orders ``log2(e_N/e_2N)``."""
    errs = [run(n) for n in ns]
    orders = [None] + [float(np.log(errs[i - 1] / errs[i]) / np.log(ns[i] / ns[i - 1])) for i in range(1, len(ns))]
    return [{"N": int(n), metric: float(e), "order": o} for n, e, o in zip(ns, errs, orders)]


def manifest_json(traj: Trajectory) -> str:
    return json.dumps(traj.manifest(), sort_keys=True, indent=2)
