"""Coefficient sets of the variable-coefficient NLS and the scenario catalog.

The equation is written in the normal form

    i psi_t = -a psi_xx + (b x^2 - f x + G) psi - i c x psi_x - i d psi
              + i g psi_x + h |psi|^(2s) psi

and every scenario stores its coefficients in exactly this form.  Some
worked examples write terms with the opposite sign; the mapping is recorded
in each scenario's ``notes``.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .expr import TimeFunction, parse_time_expression

__all__ = [
    "CoefficientSet",
    "Scenario",
    "ScenarioError",
    "load_scenario",
    "list_scenarios",
    "scenario_from_dict",
    "COEFFICIENT_NAMES",
]

COEFFICIENT_NAMES = ("a", "b", "c", "d", "f", "g", "h", "G", "f2", "g2")
_ZERO = TimeFunction.constant(0.0)


class ScenarioError(ValueError):
    pass


def _as_tf(value) -> TimeFunction:
    if isinstance(value, TimeFunction):
        return value
    if isinstance(value, (int, float)):
        return TimeFunction.constant(float(value))
    if isinstance(value, str):
        return parse_time_expression(value)
    if callable(value):
        return value  # plain callables are accepted for programmatic use
    raise TypeError(f"cannot interpret {value!r} as a time function")


@dataclass(frozen=True)
class CoefficientSet:
    """The time-dependent coefficients of one equation.

    ``f2``/``g2`` are only meaningful in two dimensions, where ``f``/``g``
    act along x and ``f2``/``g2`` along y.
    """

    a: TimeFunction
    b: TimeFunction = _ZERO
    c: TimeFunction = _ZERO
    d: TimeFunction = _ZERO
    f: TimeFunction = _ZERO
    g: TimeFunction = _ZERO
    h: TimeFunction = _ZERO
    G: TimeFunction = _ZERO
    s: float = 1.0
    l0: int = 1
    dimension: int = 1
    f2: TimeFunction = _ZERO
    g2: TimeFunction = _ZERO

    def __post_init__(self):
        for name in COEFFICIENT_NAMES:
            object.__setattr__(self, name, _as_tf(getattr(self, name)))
        if self.l0 not in (1, -1):
            raise ValueError("l0 must be +1 or -1")
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        if self.s < 0:
            raise ValueError("nonlinearity power s must be >= 0")

    @classmethod
    def from_strings(cls, mapping: Mapping[str, Any], **kw) -> "CoefficientSet":
        unknown = set(mapping) - set(COEFFICIENT_NAMES)
        if unknown:
            raise ScenarioError(f"unknown coefficient(s): {sorted(unknown)}")
        if "a" not in mapping:
            raise ScenarioError("missing required coefficient 'a'")
        return cls(**{k: _as_tf(v) for k, v in mapping.items()}, **kw)

    def with_(self, **changes) -> "CoefficientSet":
        return replace(self, **changes)

    def derivative(self, name: str) -> TimeFunction:
        fn = getattr(self, name)
        if isinstance(fn, TimeFunction):
            return fn.derivative()
        from .validate import central_derivative

        return lambda t: central_derivative(fn, t)

    def is_zero(self, name: str) -> bool:
        fn = getattr(self, name)
        return isinstance(fn, TimeFunction) and fn.is_zero

    def check_dispersion(self, t) -> None:
        """Raise if ``a`` vanishes anywhere on the sample times ``t``."""
        av = np.atleast_1d(self.a(np.asarray(t, dtype=float)))
        if np.any(~np.isfinite(av)) or np.any(av == 0.0):
            raise ScenarioError("dispersion coefficient a(t) vanishes or is singular")

    def as_strings(self) -> dict[str, str]:
        out = {}
        for name in COEFFICIENT_NAMES:
            fn = getattr(self, name)
            if isinstance(fn, TimeFunction):
                if not fn.is_zero:
                    out[name] = fn.source
            else:
                out[name] = "<callable>"
        return out


@dataclass(frozen=True)
class Scenario:
    name: str
    coefficients: CoefficientSet
    time_domain: tuple[float, float]
    known_closed_forms: Mapping[str, TimeFunction] = field(default_factory=dict)
    seed: Mapping[str, Any] = field(default_factory=dict)
    phase: Mapping[str, Any] = field(default_factory=dict)
    notes: str = ""

    def interior(self, n: int = 200, margin: float = 1e-2) -> np.ndarray:
        t0, t1 = self.time_domain
        span = t1 - t0
        return np.linspace(t0 + margin * span, t1 - margin * span, n)


def scenario_from_dict(data: Mapping[str, Any]) -> Scenario:
    """Build a :class:`Scenario` from the JSON schema used by catalog files."""
    try:
        name = data["name"]
        coeff_src = data["coefficients"]
    except KeyError as exc:
        raise ScenarioError(f"scenario missing field {exc.args[0]!r}") from None
    if not isinstance(coeff_src, Mapping):
        raise ScenarioError("'coefficients' must be an object")
    coeffs = CoefficientSet.from_strings(
        coeff_src,
        s=float(data.get("s", 1.0)),
        l0=int(data.get("l0", 1)),
        dimension=int(data.get("dimension", 1)),
    )
    closed = {k: parse_time_expression(v) for k, v in data.get("closed_forms", {}).items()}
    dom = data.get("time_domain", [0.0, 1.0])
    if len(dom) != 2 or not dom[0] < dom[1]:
        raise ScenarioError("time_domain must be [t0, t1] with t0 < t1")
    return Scenario(
        name=name,
        coefficients=coeffs,
        time_domain=(float(dom[0]), float(dom[1])),
        known_closed_forms=closed,
        seed=dict(data.get("seed", {})),
        phase=dict(data.get("phase", {})),
        notes=data.get("notes", ""),
    )


def _catalog_files() -> dict[str, Path]:
    override = os.environ.get("VCNLS_CATALOG_DIR")
    if override:
        root = Path(override)
        files = sorted(root.glob("*.json"))
    else:
        root = resources.files("vcnls") / "catalog"
        files = sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".json"))
    return {p.stem: p for p in files}


def list_scenarios() -> list[str]:
    return sorted(_catalog_files())


def load_scenario(name_or_path: str | os.PathLike) -> Scenario:
    """Load a catalog scenario by name, or a scenario file by path."""
    path = Path(name_or_path)
    if path.suffix == ".json" and path.exists():
        source = path
    else:
        files = _catalog_files()
        if str(name_or_path) not in files:
            raise ScenarioError(f"unknown scenario {str(name_or_path)!r}")
        source = files[str(name_or_path)]
    try:
        data = json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed scenario file {source}: {exc}") from None
    return scenario_from_dict(data)
