"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line; the
lines are collected again in the terminal summary."""
import io
import math
import time

import numpy as np

from qbmtemp import cli, oracle, qbm, thermo
from qbmtemp.qbm import ModelParams
from qbmtemp.spa import CompositeSystem, power_law_term, solve_saddle, spa_dos
from qbmtemp.specfun import ZETA4

KAPPA, WD = 5.0, 10.0


def params(gamma, omegaD=WD):
    return ModelParams.from_paper(KAPPA, omegaD, gamma)


def e_int(e_paper):
    return float(qbm.energy_from_paper(e_paper, params(0.0)))


def beta(E, gamma, omegaD=WD):
    return thermo.beta_of_E(E, params(gamma, omegaD)).beta_star


def test_criterion_01_gamma_zero_closed_form(report):
    t0 = time.perf_counter()
    energies = np.geomspace(1e-3, 1e3, 20)
    p = params(0.0)
    errs = [abs(beta(E, 0.0) - (6 * KAPPA * ZETA4 / (p.hbar**3 * E)) ** 0.25) / beta(E, 0.0) for E in energies]
    elapsed = time.perf_counter() - t0
    ok = max(errs) <= 1e-8 and elapsed < 1.0
    assert report(1, ok, f"max rel err {max(errs):.2e} (<= 1e-8), {elapsed:.2f} s (< 1 s)")


def test_criterion_02_rhs_vanishes_at_gamma_zero(report):
    betas = np.geomspace(0.01, 100, 200)
    worst = float(np.max(np.abs(qbm.interaction_rhs(betas, params(0.0)))))
    assert report(2, worst <= 1e-10, f"max |RHS| {worst:.2e} (<= 1e-10)")


def test_criterion_03_entropy_derivative(report):
    t0 = time.perf_counter()
    energies = np.array([e_int(e) for e in np.geomspace(0.1, 100, 10)])
    gammas = np.linspace(0.0, 20.0, 10)
    worst = 0.0
    for g in gammas:
        p = params(g)
        for E in energies:
            h = 1e-4 * E
            s_up = thermo.entropy_global(thermo.beta_of_E(E + h, p), p)
            s_dn = thermo.entropy_global(thermo.beta_of_E(E - h, p), p)
            b = thermo.beta_of_E(E, p).beta_star
            worst = max(worst, abs((s_up - s_dn) / (2 * h) - b) / b)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 10.0
    assert report(3, ok, f"max rel err {worst:.2e} (<= 1e-6) on 10x10 grid, {elapsed:.2f} s (< 10 s)")


def test_criterion_04_third_law(report):
    at_zero = []
    limit = []
    for g in (0.0, 0.5, 1.0, 2.0):
        p = params(g)
        at_zero.append(thermo.entropy_subsystem(thermo.beta_of_E(0.0, p), p))
        limit.append(thermo.entropy_subsystem(1e12, p))
    energies = [e_int(e) for e in (0.05, 0.1, 0.2, 0.5, 1.0, 2.0)]
    gammas = np.linspace(0.0, 20.0, 21)
    grid = np.array([
        [thermo.entropy_subsystem(thermo.beta_of_E(E, params(g)), params(g)) for g in gammas] for E in energies
    ])
    positive = bool(np.all(grid > 0))
    up_e = bool(np.all(np.diff(grid, axis=0) > 0))
    up_g = bool(np.all(np.diff(grid, axis=1) > 0))
    ok = max(map(abs, at_zero)) <= 1e-9 and max(limit) <= 1e-9 and positive and up_e and up_g
    assert report(
        4, ok,
        f"S_A(E=0) max {max(map(abs, at_zero)):.1e}, S_A(beta=1e12) max {max(limit):.1e}; "
        f"positive={positive}, increasing in E={up_e}, in gamma={up_g}",
    )


def test_criterion_05_figure_trends(report):
    t0 = time.perf_counter()
    gammas = np.linspace(0.0, 10.0, 21)
    fig1 = [beta(e_int(0.2), g) for g in gammas]
    fig2 = [beta(e_int(10.0), g) for g in np.linspace(0.0, 20.0, 21)]
    inset = {g: [beta(e_int(e), g) for e in np.geomspace(0.1, 100, 15)] for g in (0.0, 1.0, 10.0)}
    q2 = np.array([
        [thermo.q_squared(thermo.beta_of_E(e_int(e), params(g)), params(g)) for g in gammas]
        for e in (0.2, 1.0, 10.0)
    ])
    elapsed = time.perf_counter() - t0
    checks = {
        "dbeta/dgamma>0 (E=0.2)": bool(np.all(np.diff(fig1) > 0)),
        "dbeta/dgamma>0 (E=10)": bool(np.all(np.diff(fig2) > 0)),
        "beta decreasing in E": all(bool(np.all(np.diff(v) < 0)) for v in inset.values()),
        "q2 decreasing in gamma": bool(np.all(np.diff(q2, axis=1) < 0)),
        "q2 increasing in E": bool(np.all(np.diff(q2, axis=0) > 0)),
    }
    ok = all(checks.values()) and elapsed < 30.0
    failed = [k for k, v in checks.items() if not v]
    note = f" (failed: {', '.join(failed)})" if failed else ""
    assert report(5, ok, f"{len(checks) - len(failed)}/{len(checks)} sign conditions hold{note}, {elapsed:.2f} s (< 30 s)")


def test_criterion_06_q2_oracle(report):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(20):
        b = float(np.exp(rng.uniform(math.log(0.1), math.log(10.0))))
        g = float(rng.uniform(0.0, 20.0))
        p = params(g)
        w2, h = p.omega0**2, 1e-4

        def log_z(w2_):
            # remove the ground-state shift beta*eps0, which depends on w0 but not on the thermal state
            q = p.replace(omega0=math.sqrt(w2_))
            return qbm.log_ztilde_renormalized(b, q) - b * qbm.epsilon0(q)

        ref = -(2.0 / (p.mass * b)) * (log_z(w2 + h) - log_z(w2 - h)) / (2 * h)
        worst = max(worst, abs(thermo.q_squared_beta(b, p) - ref) / ref)
    p0 = params(0.0)
    worst0 = max(
        abs(thermo.q_squared_beta(b, p0) - 0.5 / math.tanh(b / 2)) / (0.5 / math.tanh(b / 2))
        for b in (0.01, 0.1, 1.0, 10.0, 100.0)
    )
    ok = worst <= 1e-6 and worst0 <= 1e-10
    assert report(6, ok, f"series vs -2/(m beta) dlogZ/dw0^2: {worst:.2e} (<= 1e-6); gamma=0 vs coth: {worst0:.2e} (<= 1e-10)")


def test_criterion_07_spa_vs_exact_dos(report):
    t0 = time.perf_counter()
    ratios = []
    for a in (15, 150, 1500):
        system = CompositeSystem([power_law_term(a)])
        E = a / 2.0
        gap = abs(spa_dos(system, solve_saddle(system, E)) - oracle.exact_dos_power_law(a, E))
        ratios.append(gap * 12 * a)
    elapsed = time.perf_counter() - t0
    ok = all(0.5 <= r <= 2.0 for r in ratios) and elapsed < 1.0
    assert report(7, ok, f"gap*12a = {', '.join(f'{r:.4f}' for r in ratios)} (in [0.5, 2]), {elapsed:.3f} s (< 1 s)")


def test_criterion_08_finite_n_oracle(report):
    t0 = time.perf_counter()
    p = params(1.0)
    E = e_int(10.0)
    b_inf = thermo.beta_of_E(E, p).beta_star
    errs = [abs(oracle.oracle_beta(p, E, n) - b_inf) / b_inf for n in (64, 256, 1024)]
    elapsed = time.perf_counter() - t0
    ok = errs[2] <= 0.02 and errs[0] > errs[1] > errs[2] and elapsed < 60.0
    assert report(8, ok, f"rel err N=64/256/1024: {errs[0]:.2e}/{errs[1]:.2e}/{errs[2]:.2e} (<= 2%, decreasing), {elapsed:.2f} s (< 60 s)")


def test_criterion_09_first_order_contrast(report):
    E = e_int(0.2)
    coef = thermo.FirstOrderCoefficient(params(0.0))
    small = max(
        abs(thermo.first_order_beta(E, params(g), coefficient=coef) - beta(E, g)) / beta(E, g)
        for g in (0.001, 0.005, 0.01)
    )
    gs = np.array([19.0, 20.0])
    full = [beta(E, g) for g in gs]
    first = [thermo.first_order_beta(E, params(g), coefficient=coef) for g in gs]
    slope_full, slope_first = full[1] - full[0], first[1] - first[0]
    ok = small <= 1e-3 and slope_full < slope_first
    assert report(9, ok, f"small-gamma rel diff {small:.2e} (<= 1e-3); slope at gamma=20: full {slope_full:.3f} < first-order {slope_first:.3f}")


def test_criterion_10_cli_determinism(report, tmp_path):
    commands = [
        ["beta", "--gamma", "1", "--energy", "0.2"],
        ["fig1"], ["fig2"], ["fig3"], ["fig4"], ["fig5"],
        ["sweep", "--vary", "gamma", "--min", "0", "--max", "10", "--steps", "11"],
        ["oracle-compare", "--gamma", "1", "--energy", "10"],
    ]
    identical = []
    for i, argv in enumerate(commands):
        outputs = []
        for k in range(2):
            path = tmp_path / f"{i}-{k}.csv"
            code = cli.main(argv + ["--out", str(path)], stdout=io.StringIO(), stderr=io.StringIO())
            outputs.append((code, path.read_bytes()))
        identical.append(outputs[0] == outputs[1] and outputs[0][0] == 0)
    ok = all(identical)
    assert report(10, ok, f"{sum(identical)}/{len(commands)} commands byte-identical across two runs")
