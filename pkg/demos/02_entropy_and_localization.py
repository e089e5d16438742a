"""
Subsystem entropy and position spread
=====================================

Two observables of the central oscillator evaluated at the microcanonical
temperature: its entropy S_A and its position variance <q^2>.
"""
from qbmtemp import ModelParams, energy_from_paper, entropy_subsystem, q_squared, thermo

p = ModelParams.from_paper(5.0, 10.0, 0.0)

print("S_A / K")
print("  E_paper " + "".join(f"  gamma={g:<5}" for g in (0, 1, 5, 10)))
for e in (0.0, 0.2, 1.0, 10.0):
    E = float(energy_from_paper(e, p))
    vals = []
    for g in (0, 1, 5, 10):
        q = p.replace(gamma=g)
        vals.append(entropy_subsystem(thermo.beta_of_E(E, q), q))
    print(f"  {e:7} " + "".join(f"  {v:<11.5f}" for v in vals))

# S_A vanishes at E = 0; on the way down it falls like pi gamma / (3 beta),
# so the approach is slow in E (beta ~ E^(-1/4)).
q = p.replace(gamma=2.0)
print("\nS_A approaching the ground state, gamma = 2")
for E in (1e-2, 1e-6, 1e-10):
    sol = thermo.beta_of_E(E, q)
    print(f"  E={E:.0e}: beta={sol.beta_star:10.2f}  S_A={entropy_subsystem(sol, q):.3e}")

# Damping localizes the particle; heating spreads it.
print("\n<q^2>")
print("  gamma " + "".join(f"  E={e:<6}" for e in (0.2, 1.0, 10.0)))
for g in (0.0, 1.0, 5.0, 10.0):
    q = p.replace(gamma=g)
    vals = [q_squared(thermo.beta_of_E(float(energy_from_paper(e, q)), q), q) for e in (0.2, 1.0, 10.0)]
    print(f"  {g:5} " + "".join(f"  {v:.6f}" for v in vals))
print(f"\nground state, gamma=5: <q^2> = {thermo.q_squared_ground_state(p.replace(gamma=5.0)):.6f} (0.5 when uncoupled)")
