"""Collapse of a 2D Gross-Pitaevskii condensate built from the Townes profile.

Q solves Delta Q - Q + Q^3 = 0 and is found by shooting on Q(0). Placing
Q into the pseudoconformal solution and then through the 2D lens transform
gives an exact solution of

    i psi_t = -(psi_xx + psi_yy) + (x^2 + y^2)/4 psi - 2 |psi|^2 psi

whose modulus is Q scaled by 1/mu0(t); it blows up as t -> 0 and again
as t -> pi.
"""
import numpy as np

from vcnls import RiccatiParameters, ground_state_radial, load_scenario, pde_residual, pseudoconformal_blowup
from vcnls.transforms import riccati_pair_2d
from vcnls.validate import system_residual

Q = ground_state_radial()
print(f"Q(0) = {Q.info['Q0']:.12f}, Q(5) = {float(Q.F(5.0)):.3e}")

sc = load_scenario("example2_gp")
c = sc.coefficients
p = RiccatiParameters.from_mapping({**sc.phase["params"], "l0": c.l0})
sx, sy = riccati_pair_2d(c, p, p, 1.5, closed_forms=sc.known_closed_forms)
print(f"phase system residual {system_residual(sx, c.with_(dimension=1)).max_abs:.1e}")

psi = pseudoconformal_blowup(sx, Q, sy, coeffs=c)
print(f"2D equation residual {pde_residual(psi, grid='0.3:1.4:12,-3:3:41,-3:3:41').max_abs:.1e}")

print("   t      max|psi|   Q(0)/(2 sin t)")
for t in (1.4, 0.8, 0.4, 0.2, 0.1, 0.05):
    print(f"{t:5.2f}  {abs(psi.psi(t, 0.0, 0.0)):10.4f}  {Q.info['Q0'] / (2 * np.sin(t)):10.4f}")
