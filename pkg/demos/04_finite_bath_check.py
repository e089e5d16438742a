"""
A finite bath as a cross-check
==============================

Replace the continuous bath by N oscillators, diagonalize the coupled
system exactly and solve the same saddle condition on the exact spectrum.
As N grows this should approach the analytic beta.

Two discretizations are compared.  "continuum-matched" reproduces the
continuum model behind the analytic formulas.  "equal-mode-weight" keeps the
exponential cutoff in both spectral densities and so converges to a
slightly different bath; its gap to the analytic curve is the size of the
cutoff effect the analytic bath term leaves out.
"""
from qbmtemp import ModelParams, beta_of_E, energy_from_paper
from qbmtemp.oracle import oracle_beta

for gamma in (0.0, 1.0):
    p = ModelParams(gamma=gamma)
    E = float(energy_from_paper(10.0, p))
    b_inf = beta_of_E(E, p).beta_star
    print(f"gamma={gamma}, E=10: analytic beta = {b_inf:.6f}")
    for scheme in ("continuum-matched", "equal-mode-weight"):
        errs = []
        for n in (64, 256, 1024, 2048):
            errs.append(f"N={n}: {abs(oracle_beta(p, E, n, scheme=scheme) - b_inf) / b_inf:.2e}")
        print(f"  {scheme:18} " + "  ".join(errs))
