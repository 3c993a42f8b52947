"""Exact solutions of variable-coefficient nonlinear Schroedinger equations.

Pipeline: coefficients -> characteristic basis -> Riccati/Ermakov phase
functions -> seed solution -> lens transform -> residual checks.
"""
from .blowup import BlowupReport, amplitude_envelope, predict_blowup
from .characteristic import CharacteristicBasis, characteristic_coefficients, solve_basis
from .coeffs import CoefficientSet, Scenario, ScenarioError, list_scenarios, load_scenario
from .ermakov import balanced_coefficients, ermakov_multiparameter
from .riccati import (
    PhaseSolution,
    RiccatiParameters,
    alternative_solve,
    kappa_nonlinear,
    riccati_kernel,
    riccati_multiparameter,
)
from .seeds import build_seed, elliptic_profile, ground_state_radial
from .simulate import compare_to_exact, integrate
from .special import dawson, ellipk, jacobi_elliptic
from .transforms import (
    ExactSolution,
    family_solution,
    lens_apply,
    closed_form_solution,
    plane_wave,
    pseudoconformal_blowup,
    solve_scenario,
    soliton_assemble,
    transform_2d,
)
from .validate import mass_law_check, pde_residual, system_residual

__version__ = "0.1.0"

__all__ = [
    "BlowupReport",
    "CharacteristicBasis",
    "CoefficientSet",
    "ExactSolution",
    "PhaseSolution",
    "RiccatiParameters",
    "Scenario",
    "ScenarioError",
    "alternative_solve",
    "amplitude_envelope",
    "balanced_coefficients",
    "build_seed",
    "characteristic_coefficients",
    "compare_to_exact",
    "dawson",
    "elliptic_profile",
    "ellipk",
    "ermakov_multiparameter",
    "family_solution",
    "ground_state_radial",
    "integrate",
    "jacobi_elliptic",
    "kappa_nonlinear",
    "lens_apply",
    "list_scenarios",
    "load_scenario",
    "mass_law_check",
    "closed_form_solution",
    "pde_residual",
    "plane_wave",
    "predict_blowup",
    "pseudoconformal_blowup",
    "riccati_kernel",
    "riccati_multiparameter",
    "solve_basis",
    "solve_scenario",
    "soliton_assemble",
    "system_residual",
    "transform_2d",
]
