"""Generic saddle-point engine for microcanonical densities of states.

A composite system is a sum of log-partition-function terms.  Its density of
states G(E) = (1/2pi) int dtau exp(i E tau + log Z(i tau)) is evaluated by
the saddle-point approximation on the real-beta axis, tau* = -i beta.
"""
from dataclasses import dataclass, field
import math
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import EmptyInput, InvalidParams, MaxIterations, NoBracket, SpaInvalid

# Returns (log Z, d log Z / d beta, d^2 log Z / d beta^2) at a given beta.
LogZFunction = Callable[[float], tuple]

TOL_REL = 1e-10
TOL_ABS = 1e-12
DEFAULT_BRACKET = (1e-6, 1e6)


@dataclass(frozen=True)
class LogZTerm:
    """A named log Z contribution.  ``dfunc``, if given, returns only
    d log Z / d beta and is used by the root search to skip the other two."""

    name: str
    func: LogZFunction
    dfunc: Callable[[float], float] | None = None

    def __call__(self, beta):
        return self.func(beta)

    def derivative(self, beta):
        if self.dfunc is not None:
            return self.dfunc(beta)
        return self.func(beta)[1]


@dataclass(frozen=True)
class CompositeSystem:
    terms: Sequence[LogZTerm]
    particle_fractions: Sequence[float] = ()
    energy_per_particle: float | None = None

    def __post_init__(self):
        if not self.terms:
            raise EmptyInput("a composite system needs at least one log Z term")
        fr = np.asarray(self.particle_fractions, dtype=float)
        if fr.size and (np.any(fr < 0) or abs(fr.sum() - 1.0) > 1e-12):
            raise InvalidParams("particle fractions must be nonnegative and sum to 1")

    def evaluate(self, beta):
        """Summed (log Z, d log Z, d^2 log Z) at ``beta``."""
        total = np.zeros(3)
        for term in self.terms:
            total += np.asarray(term(beta), dtype=float)
        return total

    def log_z(self, beta):
        return self.evaluate(beta)[0]

    def derivative(self, beta):
        """Summed d log Z / d beta."""
        return float(sum(float(t.derivative(beta)) for t in self.terms))

    def mean_energies(self, beta):
        """Per-term mean energies -d log Z_i / d beta."""
        return {t.name: -float(t(beta)[1]) for t in self.terms}


@dataclass(frozen=True)
class SaddleSolution:
    beta_star: float
    E: float
    residual: float
    phi_second: float
    entropy_over_k: float
    bracket: tuple
    iterations: int
    converged: bool = True
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def log_z(self):
        return self.entropy_over_k - self.beta_star * self.E

    @property
    def free_energy(self):
        """F = -log Z / beta, equivalently E - T S."""
        return -self.log_z / self.beta_star


def power_law_term(a, name="power-law"):
    """log Z = -a log beta, e.g. 2a quadratic degrees of freedom (a classical
    ideal gas of N atoms has a = 3N/2).  Its exact DOS is E^(a-1)/Gamma(a)."""
    def func(beta):
        return (-a * math.log(beta), -a / beta, a / beta**2)
    return LogZTerm(name, func)


def _residual_bound(E, tol_abs, tol_rel):
    return tol_abs + tol_rel * abs(E)


def solve_saddle(
    system,
    E,
    bracket=DEFAULT_BRACKET,
    tol_rel=TOL_REL,
    tol_abs=TOL_ABS,
    maxiter=200,
    max_expansions=12,
):
    """Solve E + sum_i d log Z_i / d beta = 0 for beta > 0.

    The search runs in log(beta) with Brent's method inside a sign-change
    bracket; the bracket is widened geometrically (by a factor 1e3 on each
    side) when no sign change is found.
    """
    lo, hi = map(float, bracket)
    if not (0 < lo < hi):
        raise InvalidParams(f"bad bracket {bracket}")

    def f(beta):
        return E + system.derivative(beta)

    f_lo, f_hi = f(lo), f(hi)
    expansions = 0
    while f_lo * f_hi > 0:
        if expansions >= max_expansions:
            raise NoBracket(f"no sign change of the saddle condition in [{lo:g}, {hi:g}] for E={E:g}")
        lo, hi = lo * 1e-3, hi * 1e3
        f_lo, f_hi = f(lo), f(hi)
        expansions += 1
    if f_lo == 0.0:
        lo_root = lo
        iterations = 0
    elif f_hi == 0.0:
        lo_root = hi
        iterations = 0
    else:
        try:
            u, info = brentq(
                lambda u: f(math.exp(u)),
                math.log(lo),
                math.log(hi),
                xtol=1e-15,
                rtol=4 * np.finfo(float).eps,
                maxiter=maxiter,
                full_output=True,
                disp=False,
            )
        except RuntimeError as exc:  # pragma: no cover - brentq only raises with disp=True
            raise MaxIterations(str(exc)) from exc
        if not info.converged:
            raise MaxIterations(f"saddle search did not converge in {maxiter} iterations")
        lo_root = math.exp(u)
        iterations = info.iterations

    beta = lo_root
    logz, dlogz, d2logz = system.evaluate(beta)
    residual = E + dlogz
    if abs(residual) > _residual_bound(E, tol_abs, tol_rel):
        # one secant/Newton touch-up on the converged bracket
        if d2logz != 0:
            beta_n = beta - residual / d2logz
            if beta_n > 0:
                ln, dn, d2n = system.evaluate(beta_n)
                if abs(E + dn) < abs(residual):
                    beta, logz, dlogz, d2logz = beta_n, ln, dn, d2n
                    residual = E + dn
    if abs(residual) > _residual_bound(E, tol_abs, tol_rel):
        raise MaxIterations(
            f"residual {residual:.3e} exceeds bound {_residual_bound(E, tol_abs, tol_rel):.3e}"
        )
    phi_second = -d2logz
    if not np.isfinite(phi_second) or phi_second == 0.0:
        raise SpaInvalid(f"vanishing curvature at beta={beta:g}")
    return SaddleSolution(
        beta_star=beta,
        E=float(E),
        residual=float(residual),
        phi_second=float(phi_second),
        entropy_over_k=float(beta * E + logz),
        bracket=(lo, hi),
        iterations=int(iterations),
    )


def select_max_entropy(candidates):
    """Maximum-entropy branch; ties go to the smaller beta."""
    candidates = list(candidates)
    if not candidates:
        raise EmptyInput("no saddle candidates")
    return min(candidates, key=lambda s: (-s.entropy_over_k, s.beta_star))


def spa_dos(system, solution):
    """log G(E) in the Gaussian saddle-point approximation,
    beta E + log Z(beta) - 0.5 log(2 pi d^2 log Z / d beta^2)."""
    logz, _, curvature = system.evaluate(solution.beta_star)
    if not curvature > 0:
        raise SpaInvalid(f"non-positive curvature {curvature:g} at beta={solution.beta_star:g}")
    return solution.beta_star * solution.E + logz - 0.5 * math.log(2 * math.pi * curvature)


def find_saddles(system, E, betas):
    """All sign changes of the saddle condition on the grid ``betas``,
    each refined by :func:`solve_saddle`."""
    betas = np.asarray(betas, dtype=float)
    f = np.array([E + system.derivative(b) for b in betas])
    out = []
    for i in np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]:
        out.append(solve_saddle(system, E, bracket=(betas[i], betas[i + 1]), max_expansions=0))
    return out
