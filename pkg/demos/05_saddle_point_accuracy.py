"""
How good is the saddle point?
=============================

For log Z = -a log beta the density of states is known exactly,
G(E) = E^(a-1) / Gamma(a).  The Gaussian saddle-point estimate misses it by
Stirling's correction, log G_SPA - log G = 1/(12 a) + O(a^-3), so the
relative error shrinks like 1/a (a plays the role of the particle number).
"""
import numpy as np

from qbmtemp import CompositeSystem, exact_dos_power_law, solve_saddle, spa_dos
from qbmtemp.oracle import bromwich_log_dos
from qbmtemp.spa import power_law_term

print("     a     SPA - exact    1/(12a)   contour integral - exact")
for a in (1.5e1, 1.5e2, 1.5e3):
    system = CompositeSystem([power_law_term(a)])
    E = a / 2
    sol = solve_saddle(system, E)
    exact = exact_dos_power_law(a, E)
    contour = bromwich_log_dos(lambda b: -a * np.log(b), E, sol.beta_star)
    print(f"{a:6.0f}  {spa_dos(system, sol) - exact:12.4e}  {1 / (12 * a):10.4e}  {contour - exact:14.2e}")
