"""Finite-time blow-up read off the characteristic equation.

For i psi_t = -psi_xx/2 + |psi|^2 psi the characteristic basis is mu0 = t,
mu1 = 1, so the regularized mu = mu(0)(2 alpha(0) t + 1) and a negative
initial chirp alpha(0) focuses the plane-wave solution at T* = -1/(2 alpha(0)).

Run:  python demos/01_blowup_from_the_characteristic_equation.py
"""
import numpy as np

from vcnls import (RiccatiParameters, load_scenario, predict_blowup, riccati_kernel,
                   riccati_multiparameter, solve_basis, solve_scenario)
from vcnls.simulate import integrate

sc = load_scenario("example1")
basis = solve_basis(sc.coefficients, sc.time_domain[1])
kernel = riccati_kernel(basis)

print("alpha(0)   predicted T*   -1/(2 alpha(0))")
for alpha0 in (-0.25, -0.5, -1.0, -2.0):
    sol = riccati_multiparameter(kernel, RiccatiParameters(mu0=0.5, alpha0=alpha0))
    rep = predict_blowup(sol)
    print(f"{alpha0:8.3f}   {rep.t_star:12.10f}   {-1 / (2 * alpha0):12.10f}")

# positive chirp: defocusing, mu never vanishes
sol = riccati_multiparameter(kernel, RiccatiParameters(mu0=0.5, alpha0=0.3))
print("alpha(0) = 0.3 ->", predict_blowup(sol))

# the amplitude |psi| = |mu|^(-1/2) = 2 (T* - t)^(-1/2) with mu(0) = 1/2
_, exact = solve_scenario(sc)
T = exact.predicted_blowup
for frac in (0.5, 0.9, 0.99, 0.999):
    t = frac * T
    print(f"t = {t:.4f}  max|psi| = {abs(exact.psi(t, 0.0)):.4f}  2 (T* - t)^(-1/2) = {2 / np.sqrt(T - t):.4f}")

# a direct simulation stops close to T*: the chirp alpha(t) x^2 outruns the grid
traj = integrate(sc.coefficients, exact, 0.0, exact.domain[1], n=256, half_width=5.0, boundary="exact", tol=1e-6)
print(f"simulation stopped at t = {traj.t_stop:.4f} ({traj.stop_reason}); T* = {T}")
