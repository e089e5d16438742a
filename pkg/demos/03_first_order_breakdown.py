"""
Expanding in the damping
========================

Replacing the interaction term by its first-order Taylor term in gamma
works for weak coupling and fails badly at strong coupling: the full
beta(gamma) saturates, the linearized one keeps climbing.
"""
from qbmtemp import ModelParams, beta_of_E, energy_from_paper, first_order_beta
from qbmtemp.thermo import FirstOrderCoefficient

p = ModelParams.from_paper(5.0, 10.0, 0.0)
E = float(energy_from_paper(0.2, p))
coef = FirstOrderCoefficient(p)  # reused across gamma, it only depends on beta

print(" gamma      full   first order   rel. diff")
prev = None
for g in (0.0, 0.01, 0.1, 0.5, 1, 2, 5, 10, 15, 20):
    q = p.replace(gamma=g)
    full = beta_of_E(E, q).beta_star
    lin = first_order_beta(E, q, coefficient=coef)
    print(f"{g:6} {full:9.4f} {lin:13.4f} {abs(lin - full) / full:11.2e}")
