"""Direct simulation versus the exact solutions.

The method-of-lines integrator (fourth-order differences or Fourier
derivatives, DOP853 in time) and a Strang split-step are checked against
the standard bright soliton, then used on two variable-coefficient
scenarios: a dark soliton in a time-dependent trap and the damped sch1
wave, whose mass follows ||psi(t)||^2 = ||psi(0)||^2 exp(-3(1 - cos t)).
"""
import numpy as np

from vcnls import load_scenario, closed_form_solution, solve_scenario
from vcnls.coeffs import CoefficientSet
from vcnls.simulate import compare_to_exact, convergence_table, integrate, make_grid

std = CoefficientSet(a=0.5, h=-1.0)


class Bright:
    @staticmethod
    def psi(t, x):
        return np.exp(0.5j * np.asarray(t)) / np.cosh(x)


def error(n, space):
    x = make_grid(20 * np.pi, n, True)
    tr = integrate(std, Bright.psi(0, x), 0, 1, x=x, space=space, boundary="periodic", times=[1.0], tol=1e-12,
                   resolution_check=False)
    return compare_to_exact(tr, Bright)[-1]["L2"]


for space in ("fd4", "spectral"):
    print(space)
    for row in convergence_table(lambda n: error(n, space), [128, 256, 512]):
        order = "" if row["order"] is None else f"  order {row['order']:.2f}"
        print(f"  N={row['N']:5d}  L2 error {row['L2']:.3e}{order}")

ex = closed_form_solution("g2")
tr = integrate(ex.coeffs, ex, 0.5, 1.0, n=1024, half_width=10, boundary="exact", times=[0.75, 1.0], tol=1e-10)
for r in compare_to_exact(tr, ex):
    print(f"dark soliton t={r['t']:.2f}  Linf {r['Linf']:.2e}")

sc = load_scenario("sch1")
_, ex = solve_scenario(sc)
times = np.linspace(0, 3, 7)
tr = integrate(sc.coefficients, ex, 0, 3, n=1024, times=times, tol=1e-10)
m = tr.mass()
for t, mm in zip(tr.times, m):
    print(f"sch1 t={t:.1f}  mass ratio {mm / m[0]:.6f}  law {np.exp(-3 * (1 - np.cos(t))):.6f}")
