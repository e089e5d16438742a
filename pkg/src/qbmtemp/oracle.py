"""Independent checks: a finite-N discretized bath solved by exact normal
modes, and exact densities of states for the saddle-point engine.

Two bath discretizations are provided.

``"equal-mode-weight"``
    Nodes at the quantile midpoints of the bath mode density
    rho(w) = kappa w^2 exp(-w/wD), every node standing for the same number
    of physical modes, couplings from the exponential-cutoff J(w).  Its
    N -> inf limit is the bath with both spectral densities exactly as
    written, which the analytic formulas only approximate (the thermal
    bath term drops the cutoff; the Matsubara kernel is that of a
    Lorentzian cutoff).

``"continuum-matched"``
    A weighted quadrature whose N -> inf limit is exactly the model the
    analytic formulas describe: mode density kappa w^2 without cutoff and
    the Lorentzian-Drude coupling J(w) = m gamma w wD^2 / (w^2 + wD^2),
    which generates the Drude memory kernel gamma wD / (wD + nu).  Nodes
    are quantile midpoints of a Gamma(3, node_scale) density and carry
    importance weights.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import stats

from .errors import DomainError, InvalidParams, NumericalFailure
from .qbm import ZETA4
from .spa import CompositeSystem, LogZTerm, solve_saddle
from .specfun import log_gamma

SCHEMES = ("equal-mode-weight", "continuum-matched")
MAX_MODES = 2048


@dataclass(frozen=True)
class DiscreteBath:
    """Bath nodes.  Node n stands for ``weights[n]`` identical physical
    oscillators of frequency ``omegas[n]``, each coupled with ``couplings[n]``."""

    omegas: np.ndarray
    couplings: np.ndarray
    masses: np.ndarray
    weights: np.ndarray
    scheme: str = "equal-mode-weight"

    @property
    def n_modes(self):
        return len(self.omegas)

    @property
    def effective_couplings(self):
        """Coupling of the symmetric combination of the copies at each node."""
        return np.sqrt(self.weights) * self.couplings

    def reconstruct(self, edges):
        """Bin-averaged mode density sum w delta and coupling density
        pi sum w c^2/(2 m_n w) delta; returns (I_binned, J_binned).

        The mode density carries no factor pi: kappa absorbs it, which is
        what makes the bath zero-point energy 3 kappa hbar wD^4."""
        widths = np.diff(edges)
        mode_hist, _ = np.histogram(self.omegas, bins=edges, weights=self.weights)
        jw = self.weights * self.couplings**2 / (2.0 * self.masses * self.omegas)
        j_hist, _ = np.histogram(self.omegas, bins=edges, weights=jw)
        return mode_hist / widths, math.pi * j_hist / widths


@dataclass(frozen=True)
class NormalModes:
    frequencies: np.ndarray
    decoupled_frequencies: np.ndarray
    decoupled_multiplicity: np.ndarray


def discretize_bath(p, n_modes, scheme="equal-mode-weight", node_scale=None):
    if n_modes < 1 or n_modes != int(n_modes):
        raise InvalidParams("n_modes must be a positive integer")
    if n_modes > MAX_MODES:
        raise InvalidParams(f"n_modes is capped at {MAX_MODES}")
    if scheme not in SCHEMES:
        raise InvalidParams(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    n_modes = int(n_modes)
    u = (np.arange(n_modes) + 0.5) / n_modes
    masses = np.ones(n_modes)

    if scheme == "equal-mode-weight":
        wD = p.omegaD
        omegas = stats.gamma.ppf(u, 3, scale=wD)
        total_modes = 2.0 * p.kappa * wD**3  # int kappa w^2 e^{-w/wD} dw
        weights = np.full(n_modes, total_modes / n_modes)
        # c^2 = 2 m_n w J(w) / (pi I(w)); w-independent for this pair
        c2 = 2.0 * masses * p.mass * p.gamma / (math.pi * p.kappa) * np.ones(n_modes)
    else:
        s = p.omega0 if node_scale is None else float(node_scale)
        if not s > 0:
            raise InvalidParams("node_scale must be positive")
        omegas = stats.gamma.ppf(u, 3, scale=s)
        # rho(w) / (N q(w)) with q the Gamma(3, s) density
        weights = 2.0 * p.kappa * s**3 / n_modes * np.exp(omegas / s)
        j = p.mass * p.gamma * omegas * p.omegaD**2 / (omegas**2 + p.omegaD**2)
        c2 = 2.0 * masses * omegas * j / (math.pi * p.kappa * omegas**2)
    return DiscreteBath(omegas, np.sqrt(c2), masses, weights, scheme)


def dynamical_matrix(bath, p):
    """Mass-weighted stiffness matrix of the central oscillator plus one
    symmetric bath combination per node."""
    c = bath.effective_couplings
    w = bath.omegas
    m_n = bath.masses
    n = bath.n_modes
    K = np.zeros((n + 1, n + 1))
    K[0, 0] = p.omega0**2 + np.sum(c**2 / (p.mass * m_n * w**2))
    K[0, 1:] = K[1:, 0] = -c / np.sqrt(p.mass * m_n)
    K[np.arange(1, n + 1), np.arange(1, n + 1)] = w**2
    return K


def normal_modes(bath, p):
    K = dynamical_matrix(bath, p)
    try:
        ev = np.linalg.eigvalsh(K)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolve failed: {exc}") from exc
    if not ev[0] > 0:
        raise NumericalFailure(f"non-positive squared frequency {ev[0]:.3e}")
    return NormalModes(
        frequencies=np.sqrt(ev),
        decoupled_frequencies=bath.omegas.copy(),
        decoupled_multiplicity=bath.weights - 1.0,
    )


def _oscillator_log_z(freqs, mult, hbar):
    """Summed ground-state-renormalized -log(1 - e^{-beta hbar w}) and derivatives."""
    def func(beta):
        x = beta * hbar * freqs
        with np.errstate(over="ignore"):
            logz = -np.sum(mult * np.log(-np.expm1(-x)))
            d1 = -np.sum(mult * hbar * freqs / np.expm1(x))
            d2 = np.sum(mult * (hbar * freqs) ** 2 / (4.0 * np.sinh(0.5 * x) ** 2))
        return (logz, d1, d2)
    return func


def finite_n_system(modes, p):
    """Exact finite-N log Z with the bare central oscillator subtracted."""
    hbar = p.hbar
    ones = np.ones_like(modes.frequencies)
    bare = _oscillator_log_z(np.array([p.omega0]), np.array([1.0]), hbar)
    return CompositeSystem([
        LogZTerm("normal-modes", _oscillator_log_z(modes.frequencies, ones, hbar)),
        LogZTerm("decoupled", _oscillator_log_z(modes.decoupled_frequencies, modes.decoupled_multiplicity, hbar)),
        LogZTerm("bare-oscillator", lambda b: tuple(-v for v in bare(b))),
    ])


def finite_n_beta(modes, bath, E, p, **solver):
    """beta_N(E): saddle of the exact finite-N partition function."""
    if not E > 0:
        raise DomainError("E must be > 0")
    if "bracket" not in solver:
        b0 = (6.0 * p.kappa * ZETA4 / (p.hbar**3 * E)) ** 0.25
        solver["bracket"] = (b0 * 1e-3, b0 * 1e3)
    return solve_saddle(finite_n_system(modes, p), E, **solver)


def oracle_beta(p, E, n_modes, scheme="continuum-matched", node_scale=None):
    bath = discretize_bath(p, n_modes, scheme=scheme, node_scale=node_scale)
    return finite_n_beta(normal_modes(bath, p), bath, E, p).beta_star


# -- exact DOS baselines ----------------------------------------------------

def exact_dos_power_law(a, E):
    """log of G(E) = E^(a-1) / Gamma(a), the inverse Laplace transform of beta^-a."""
    if not (a > 1 and E > 0):
        raise DomainError("need a > 1 and E > 0")
    return (a - 1.0) * math.log(E) - float(log_gamma(a).real)


def bromwich_log_dos(log_z, E, beta0, width=None, rtol=1e-12, max_points=2**22):
    """log G(E) by direct quadrature of

        G(E) = (1/2pi) int dt exp((beta0 + i t) E) Z(beta0 + i t)

    along the vertical line Re beta = beta0.  ``log_z`` must accept complex
    arrays.  The trapezoid rule is refined until two successive step
    halvings agree to ``rtol``.
    """
    val, ref = bromwich_integral(log_z, E, beta0, None, width, rtol, max_points)
    if not val > 0:
        raise NumericalFailure(f"non-positive density of states {val:g}")
    return math.log(val) + ref


def bromwich_average(log_z, observable, E, beta0, width=None, rtol=1e-12, max_points=2**22):
    """Microcanonical average <g>_E = int e^{beta E} Z g / int e^{beta E} Z."""
    num, _ = bromwich_integral(log_z, E, beta0, observable, width, rtol, max_points)
    den, _ = bromwich_integral(log_z, E, beta0, None, width, rtol, max_points)
    return num / den


def bromwich_integral(log_z, E, beta0, observable=None, width=None, rtol=1e-12, max_points=2**22):
    """(1/2pi) int exp((beta0+it)E + log Z(beta0+it)) g(beta0+it) dt
    (``g`` defaults to 1), returned as ``(value * exp(-ref), ref)`` to keep
    large actions finite.  The integrand is conjugate-symmetric in t, so
    only t >= 0 is sampled."""
    ref = beta0 * E + complex(log_z(np.array([beta0 + 0j]))[0]).real

    def integrand(t):
        b = beta0 + 1j * t
        val = np.exp(b * E + log_z(b) - ref)
        if observable is not None:
            val = val * observable(b)
        return val.real

    if width is None:
        width = beta0
    # extend until the integrand is negligible
    t_max = width
    while abs(integrand(np.array([t_max]))[0]) > 1e-20 and t_max < 1e6 * width:
        t_max *= 2.0
    n = 256
    prev = None
    while True:
        t = np.linspace(0.0, t_max, n + 1)
        y = integrand(t)
        h = t[1] - t[0]
        val = h * (y.sum() - 0.5 * y[0] - 0.5 * y[-1]) / math.pi
        if prev is not None and abs(val - prev) <= rtol * abs(val):
            break
        if n >= max_points:
            raise NumericalFailure("Bromwich quadrature did not converge")
        prev = val
        n *= 2
    return val, ref
