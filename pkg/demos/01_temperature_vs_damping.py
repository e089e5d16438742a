"""
Temperature of an oscillator in a Drude bath
============================================

An isolated system (oscillator + bath) at fixed energy E has no externally
imposed temperature.  A saddle-point evaluation of its density of states
still assigns one, beta(E, gamma), and this script tabulates how it moves
with the damping gamma and the bath cutoff omegaD.

Energies are quoted as E / (hbar omega0 / 2pi) and frequencies in units of
omega0, with kappa omega0^3 = 5.
"""
import numpy as np

from qbmtemp import ModelParams, beta_of_E, energy_from_paper
from qbmtemp.specfun import ZETA4

# Without coupling the oscillator only adds a constant; the bath alone fixes
# beta through E = 6 kappa zeta(4) / beta^4.
p = ModelParams.from_paper(5.0, 10.0, 0.0)
for e_paper in (0.2, 10.0):
    E = float(energy_from_paper(e_paper, p))
    print(f"gamma=0, E={e_paper:5}: beta={beta_of_E(E, p).beta_star:.6f}  closed form {(6 * 5 * ZETA4 / E) ** 0.25:.6f}")

# Near the ground state, stronger damping cools the system down.
print("\nE = 0.2, omegaD = 10")
E = float(energy_from_paper(0.2, p))
for g in (0.0, 0.5, 1, 2, 5, 10):
    print(f"  gamma={g:5}: beta={beta_of_E(E, p.replace(gamma=g)).beta_star:.5f}")

# At higher energy the trend depends on the bath memory: a fast bath
# (large omegaD) still raises beta, a slow one lowers it.
E = float(energy_from_paper(10.0, p))
print("\nE = 10: beta(gamma) for several cutoffs")
wds = (10.0, 1.0, 0.1)
print("  gamma " + "".join(f"  wD={w:<7}" for w in wds))
for g in (0.0, 1.0, 5.0, 20.0):
    row = [beta_of_E(E, ModelParams(gamma=g, omegaD=w)).beta_star for w in wds]
    print(f"  {g:5} " + "".join(f"  {b:.6f}  " for b in row))

# Scanning omegaD at fixed gamma shows the crossover between the two regimes
# as an interior minimum of beta(omegaD).
print("\nE = 10, gamma = 5: beta(omegaD)")
for w in np.geomspace(0.05, 100, 9):
    print(f"  omegaD={w:8.3f}: beta={beta_of_E(E, ModelParams(gamma=5.0, omegaD=w)).beta_star:.6f}")
