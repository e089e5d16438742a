"""Microcanonical thermodynamics of the Drude QBM model at beta(E, gamma)."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import qbm
from .errors import DomainError, NoBracket, QBMError
from .spa import CompositeSystem, LogZTerm, SaddleSolution, solve_saddle

TWO_PI = 2.0 * math.pi


def qbm_system(p):
    """The renormalized QBM model as a composite of three log Z terms."""
    roots = p.roots

    def bath(beta):
        return (qbm.log_zb_thermal(beta, p), qbm.dlog_zb_thermal(beta, p), qbm.d2log_zb_thermal(beta, p))

    def oscillator(beta):
        return (
            qbm.log_ztilde_renormalized(beta, p, roots),
            qbm.dlog_ztilde_renormalized(beta, p, roots),
            qbm.d2log_ztilde_renormalized(beta, p, roots),
        )

    def bare(beta):
        return (
            -qbm.log_za_renormalized(beta, p),
            -qbm.dlog_za_renormalized(beta, p),
            -qbm.d2log_za_renormalized(beta, p),
        )

    return CompositeSystem([
        LogZTerm("bath", bath, lambda b: qbm.dlog_zb_thermal(b, p)),
        LogZTerm("oscillator", oscillator, lambda b: qbm.dlog_ztilde_renormalized(b, p, roots)),
        LogZTerm("bare-oscillator", bare, lambda b: -qbm.dlog_za_renormalized(b, p)),
    ])


def ground_state_solution():
    """The E = 0 limit: beta -> inf, S = 0."""
    return SaddleSolution(
        beta_star=math.inf,
        E=0.0,
        residual=0.0,
        phi_second=0.0,
        entropy_over_k=0.0,
        bracket=(math.inf, math.inf),
        iterations=0,
        extras={"ground_state": True},
    )


def beta_of_E(E, p, **solver):
    """Solve the renormalized equilibrium condition for beta(E, gamma).

    ``E`` is an internal-unit energy above the ground state.  E = 0 returns
    the ground-state limit with ``beta_star = inf``.
    """
    if not E >= 0:
        raise DomainError(f"E must be >= 0 (got {E})")
    if E == 0:
        return ground_state_solution()
    if "bracket" not in solver:
        # gamma = 0 closed form as a centre for the initial bracket
        b0 = (6.0 * p.kappa * qbm.ZETA4 / (p.hbar**3 * E)) ** 0.25
        solver["bracket"] = (b0 * 1e-3, b0 * 1e3)
    return solve_saddle(qbm_system(p), E, **solver)


def entropy_global(sol, p):
    """S/K = beta E + log Z_AB(beta)."""
    if math.isinf(sol.beta_star):
        return 0.0
    return sol.beta_star * sol.E + qbm.log_z_total(sol.beta_star, p)


def entropy_subsystem(sol, p):
    """Coupled-oscillator entropy S_A/K = log Z~ - beta d(log Z~)/d beta."""
    beta = sol.beta_star if isinstance(sol, SaddleSolution) else float(sol)
    if math.isinf(beta):
        return 0.0
    return qbm.log_ztilde_renormalized(beta, p) - beta * qbm.dlog_ztilde_renormalized(beta, p)


def mean_energy_oscillator(sol, p):
    """-d log Z~_ren / d beta: mean energy of the coupled oscillator above its ground state."""
    beta = sol.beta_star if isinstance(sol, SaddleSolution) else float(sol)
    if math.isinf(beta):
        return 0.0
    return -qbm.dlog_ztilde_renormalized(beta, p)


# -- <q^2> ----------------------------------------------------------------

def _drude_denominator(nu, p):
    """nu^2 + w0^2 + nu gamma-hat(nu) with the Drude memory kernel."""
    g, wD = p.gamma, p.omegaD
    return nu**2 + p.omega0**2 + nu * g * wD / (wD + nu)


def _denominator_derivatives(nu, p):
    g, wD = p.gamma, p.omegaD
    s = wD + nu
    d1 = 2.0 * nu + g * wD**2 / s**2
    d2 = 2.0 - 2.0 * g * wD**2 / s**3
    d3 = 6.0 * g * wD**2 / s**4
    return d1, d2, d3


def _frequency_scale(p):
    lam = np.abs(p.roots.as_array())
    return max(p.omega0, p.omegaD, math.sqrt(p.omega0**2 + p.gamma * p.omegaD), lam.max())


def _tail_integral(nu_lo, p):
    """int_{nu_lo}^inf dnu / D(nu), integrated in t = 1/nu."""
    def integrand(t):
        if t == 0.0:
            return 1.0
        return 1.0 / (t * t * _drude_denominator(1.0 / t, p))
    val, _ = quad(integrand, 0.0, 1.0 / nu_lo, epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def q_squared_beta(beta, p, max_terms=200_000):
    """<q^2> at inverse temperature ``beta`` from the Matsubara series

        <q^2> = (1/(m beta)) sum_n [nu_n^2 + w0^2 + |nu_n| gamma wD / (wD + |nu_n|)]^-1

    with explicit terms up to N and an Euler-Maclaurin tail (integral plus
    endpoint corrections through the third derivative).
    """
    if math.isinf(beta):
        return q_squared_ground_state(p)
    if not beta > 0:
        raise DomainError("beta must be positive")
    c = TWO_PI / (p.hbar * beta)  # d nu / d n
    scale = _frequency_scale(p)
    n_cut = int(min(max(64, math.ceil(20.0 * scale / c)), max_terms))
    n = np.arange(1, n_cut + 1, dtype=float)
    explicit = np.sum(1.0 / _drude_denominator(c * n, p))

    nu_N = c * n_cut
    D = _drude_denominator(nu_N, p)
    d1, d2, d3 = _denominator_derivatives(nu_N, p)
    g = 1.0 / D
    g1 = -d1 / D**2 * c
    g3 = (-d3 / D**2 + 6.0 * d1 * d2 / D**3 - 6.0 * d1**3 / D**4) * c**3
    # sum_{n>N} g(n) = int_N^inf g - g(N)/2 - g'(N)/12 + g'''(N)/720 - ...
    tail = _tail_integral(nu_N, p) / c - 0.5 * g - g1 / 12.0 + g3 / 720.0

    total = 1.0 / p.omega0**2 + 2.0 * (explicit + tail)
    return total / (p.mass * beta)


def q_squared_ground_state(p):
    """beta -> inf limit: (hbar / (pi m)) int_0^inf dnu / D(nu)."""
    lo, _ = quad(lambda nu: 1.0 / _drude_denominator(nu, p), 0.0, 1.0, epsrel=1e-13, limit=200)
    return p.hbar / (math.pi * p.mass) * (lo + _tail_integral(1.0, p))


def q_squared(sol, p):
    beta = sol.beta_star if isinstance(sol, SaddleSolution) else float(sol)
    return q_squared_beta(beta, p)


# -- first order in gamma ---------------------------------------------------

class FirstOrderCoefficient:
    """d RHS / d gamma at gamma = 0 as a function of beta.

    Forward differences at gamma = h, h/2, h/4, h/8 combined by Richardson
    extrapolation; RHS is analytic in gamma near 0.
    """

    def __init__(self, p, h=0.04, levels=4):
        self.p0 = p.replace(gamma=0.0)
        self.steps = [h / 2**k for k in range(levels)]
        self.params = [p.replace(gamma=s) for s in self.steps]
        for q in self.params:
            q.roots  # noqa: B018 - warm the cached roots

    def __call__(self, beta):
        r0 = qbm.interaction_rhs(beta, self.p0)
        table = [
            (np.asarray(qbm.interaction_rhs(beta, q)) - r0) / s
            for q, s in zip(self.params, self.steps)
        ]
        # forward differences: error in powers h, h^2, ...; halving steps
        for order in range(1, len(table)):
            factor = 2.0**order
            table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
        return table[0]


def first_order_beta(E, p, coefficient=None):
    """beta solving the equilibrium condition with the interaction term
    replaced by its first-order Taylor term in gamma about gamma = 0."""
    if not E > 0:
        raise DomainError("E must be > 0")
    coef = FirstOrderCoefficient(p) if coefficient is None else coefficient

    def f(u):
        beta = math.exp(u)
        return E + qbm.dlog_zb_thermal(beta, p) - p.gamma * float(coef(beta))

    b0 = (6.0 * p.kappa * qbm.ZETA4 / (p.hbar**3 * E)) ** 0.25
    lo, hi = math.log(b0) - 7.0, math.log(b0) + 7.0
    expansions = 0
    while f(lo) * f(hi) > 0:
        if expansions > 6:
            raise NoBracket(f"first-order condition has no root for E={E:g}, gamma={p.gamma:g}")
        lo, hi = lo - 7.0, hi + 7.0
        expansions += 1
    return math.exp(brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=300))


# -- aggregate observables and sweeps ----------------------------------------

@dataclass(frozen=True)
class ThermoPoint:
    beta: float
    E: float
    E_paper: float
    S_over_K: float
    S_A_over_K: float
    F: float
    E_tilde: float
    q2: float
    residual: float = 0.0
    iterations: int = 0
    gamma: float = float("nan")
    omegaD: float = float("nan")
    status: str = "ok"

    def as_dict(self):
        return asdict(self)


def thermo_point(E, p, **solver):
    sol = beta_of_E(E, p, **solver)
    S = entropy_global(sol, p)
    beta = sol.beta_star
    F = 0.0 if math.isinf(beta) else E - S / beta
    return ThermoPoint(
        beta=beta,
        E=float(E),
        E_paper=float(qbm.energy_to_paper(E, p)),
        S_over_K=S,
        S_A_over_K=entropy_subsystem(sol, p),
        F=F,
        E_tilde=mean_energy_oscillator(sol, p),
        q2=q_squared(sol, p),
        residual=sol.residual,
        iterations=sol.iterations,
        gamma=p.gamma,
        omegaD=p.omegaD,
    )


def _failed_point(E, p, exc):
    nan = float("nan")
    return ThermoPoint(
        beta=nan, E=float(E), E_paper=float(qbm.energy_to_paper(E, p)), S_over_K=nan,
        S_A_over_K=nan, F=nan, E_tilde=nan, q2=nan, residual=nan, iterations=0,
        gamma=p.gamma, omegaD=p.omegaD, status=f"error:{type(exc).__name__}",
    )


SWEEP_VARIABLES = ("gamma", "E", "omegaD")


def _sweep_point(args):
    vary, value, p, E = args
    try:
        if vary == "E":
            return thermo_point(value, p)
        q = p.replace(**{vary: value})
        return thermo_point(E, q)
    except QBMError as exc:
        if vary == "E":
            return _failed_point(value, p, exc)
        try:
            q = p.replace(**{vary: value})
        except QBMError:
            q = p
        return _failed_point(E, q, exc)


def sweep(vary, values, p, E=None, max_workers=None):
    """One ThermoPoint per grid value, in grid order.

    ``vary`` is one of ``"gamma"``, ``"E"`` (internal units) or ``"omegaD"``.
    Failed points become rows with ``status`` starting with ``"error"``.
    """
    if vary not in SWEEP_VARIABLES:
        raise ValueError(f"vary must be one of {SWEEP_VARIABLES}")
    if vary != "E" and E is None:
        raise ValueError("a fixed energy is required unless sweeping E")
    tasks = [(vary, float(v), p, E) for v in values]
    if max_workers and max_workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_sweep_point, tasks))
    return [_sweep_point(t) for t in tasks]
