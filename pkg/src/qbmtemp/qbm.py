"""Quantum Brownian motion with a Drude bath: partition functions and the
equilibrium condition fixing beta(E, gamma).

Conventions
-----------
Energies are measured from the renormalized ground state (E = 0).  The bath
zero-point energy ``E0`` and the coupled-oscillator ground-state shift
``epsilon0`` are therefore removed from every log Z returned here, except
:func:`log_zb`, :func:`log_za_bare` and :func:`log_ztilde`, which keep
their ground-state energies.

All functions accept a scalar or an array for ``beta``.
"""
from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .cubic import solve_drude_cubic
from .errors import DomainError, InvalidParams
from .specfun import ZETA4, stirling_remainder

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters.  Internal unit system: hbar = K = m = omega0 = 1."""

    gamma: float
    omegaD: float = 10.0
    kappa: float = 5.0
    omega0: float = 1.0
    mass: float = 1.0
    hbar: float = 1.0
    kboltz: float = 1.0

    def __post_init__(self):
        checks = {
            "gamma >= 0": self.gamma >= 0,
            "omega0 > 0": self.omega0 > 0,
            "omegaD > 0": self.omegaD > 0,
            "kappa > 0": self.kappa > 0,
            "mass > 0": self.mass > 0,
            "hbar > 0": self.hbar > 0,
            "kboltz > 0": self.kboltz > 0,
        }
        for name in ("gamma", "omegaD", "kappa", "omega0", "mass", "hbar", "kboltz"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams(f"{name} must be finite")
        failed = [k for k, ok in checks.items() if not ok]
        if failed:
            raise InvalidParams("invalid model parameters: " + ", ".join(failed))

    @classmethod
    def from_paper(cls, kappa_w0_cubed=5.0, wD_over_w0=10.0, gamma_over_w0=0.0):
        """Build from the dimensionless figure-caption parameters."""
        return cls(gamma=gamma_over_w0, omegaD=wD_over_w0, kappa=kappa_w0_cubed)

    def replace(self, **changes):
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update(changes)
        return type(self)(**fields)

    @cached_property
    def roots(self):
        return solve_drude_cubic(self.omega0, self.omegaD, self.gamma)

    @property
    def zero_point_energy(self):
        """Bath zero-point energy E0 = 3 kappa hbar omegaD^4."""
        return 3.0 * self.kappa * self.hbar * self.omegaD**4

    def spectral_density_bath(self, omega):
        """I(omega) = kappa omega^2 exp(-omega/omegaD)."""
        omega = np.asarray(omega, dtype=float)
        return self.kappa * omega**2 * np.exp(-omega / self.omegaD)

    def spectral_density_coupling(self, omega):
        """J(omega) = m gamma omega exp(-omega/omegaD)."""
        omega = np.asarray(omega, dtype=float)
        return self.mass * self.gamma * omega * np.exp(-omega / self.omegaD)


def energy_from_paper(e_paper, p):
    """E/(hbar omega0 / 2pi) -> internal energy."""
    return np.asarray(e_paper, dtype=float) * p.hbar * p.omega0 / TWO_PI


def energy_to_paper(e, p):
    return np.asarray(e, dtype=float) * TWO_PI / (p.hbar * p.omega0)


def _check_beta(beta):
    beta = np.asarray(beta, dtype=float)
    if np.any(~(beta > 0)) or np.any(~np.isfinite(beta)):
        raise DomainError("beta must be positive and finite")
    return beta


def _out(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _root_array(p, roots):
    return (p.roots if roots is None else roots).as_array()


def _real_sum(terms, scale):
    """Sum complex terms over the last axis; assert the imaginary part cancels."""
    total = terms.sum(axis=-1)
    im = np.abs(total.imag)
    if np.any(im > 1e-10 * np.maximum(scale, 1.0)):
        raise DomainError(f"imaginary residue {im.max():.3e} did not cancel")
    return total.real


# -- bath ---------------------------------------------------------------

def log_zb(beta, p):
    """log Z_B(beta) = -beta E0 + 2 kappa zeta(4) / (hbar beta)^3."""
    beta = _check_beta(beta)
    return _out(-beta * p.zero_point_energy + log_zb_thermal(beta, p))


def log_zb_thermal(beta, p):
    """Thermal part of log Z_B (ground state at zero)."""
    beta = _check_beta(beta)
    return _out(2.0 * p.kappa * ZETA4 / (p.hbar * beta) ** 3)


def dlog_zb_thermal(beta, p):
    beta = _check_beta(beta)
    return _out(-6.0 * p.kappa * ZETA4 / (p.hbar**3 * beta**4))


def d2log_zb_thermal(beta, p):
    beta = _check_beta(beta)
    return _out(24.0 * p.kappa * ZETA4 / (p.hbar**3 * beta**5))


# -- bare central oscillator --------------------------------------------

def log_za_bare(beta, p):
    """-log(2 sinh(beta hbar omega0 / 2)), ground state at hbar omega0 / 2."""
    beta = _check_beta(beta)
    x = beta * p.hbar * p.omega0
    # -log(2 sinh(x/2)) = -x/2 - log(1 - e^{-x})
    return _out(-0.5 * x - np.log(-np.expm1(-x)))


def log_za_renormalized(beta, p):
    """Bare oscillator with its ground state shifted to zero."""
    beta = _check_beta(beta)
    return _out(-np.log(-np.expm1(-beta * p.hbar * p.omega0)))


def dlog_za_renormalized(beta, p):
    """-(hbar w0 / 2)(coth(beta hbar w0 / 2) - 1) = -hbar w0 / (e^{beta hbar w0} - 1)."""
    beta = _check_beta(beta)
    x = beta * p.hbar * p.omega0
    with np.errstate(over="ignore"):
        return _out(-p.hbar * p.omega0 / np.expm1(x))


def d2log_za_renormalized(beta, p):
    beta = _check_beta(beta)
    w = p.hbar * p.omega0
    x = beta * w
    # w^2 e^x / (e^x - 1)^2 = w^2 / (4 sinh^2(x/2))
    with np.errstate(over="ignore"):
        return _out(w**2 / (4.0 * np.sinh(0.5 * x) ** 2))


# -- coupled oscillator ------------------------------------------------

def epsilon0(p, roots=None):
    """Ground-state energy of the coupled oscillator,
    (hbar/2pi) sum_i lambda_i log(omegaD / lambda_i)."""
    lam = _root_array(p, roots)
    terms = lam * np.log(p.omegaD / lam)
    total = terms.sum()
    if abs(total.imag) > 1e-10 * max(abs(total.real), 1e-300):
        raise DomainError(f"epsilon0 has imaginary residue {total.imag:.3e}")
    return p.hbar / TWO_PI * total.real


def _binet_sum(beta, p, lam, order):
    """sum_i lambda_i^k mu^(k)(x lambda_i) - wD^k mu^(k)(x wD),  x = hbar beta / 2pi."""
    x = p.hbar * beta[..., None] / TWO_PI
    terms = lam**order * stirling_remainder(x * lam, order)
    s = _real_sum(terms, np.abs(terms).sum(axis=-1))
    return s - p.omegaD**order * stirling_remainder(p.hbar * beta * p.omegaD / TWO_PI, order).real


def log_ztilde_renormalized(beta, p, roots=None):
    """log Z~(beta) + beta * epsilon0: ground state of the coupled oscillator at zero.

    Writing each log Gamma as its Stirling form plus Binet's remainder mu,
    the Stirling parts cancel exactly by the Vieta relations (sum lambda =
    wD, prod lambda = w0^2 wD) and leave

        log Z~_ren = sum_i mu(x lambda_i) - mu(x wD),

    which has no large cancelling terms at any beta.
    """
    beta = _check_beta(beta)
    lam = _root_array(p, roots)
    return _out(_binet_sum(beta, p, lam, 0))


def log_ztilde(beta, p, roots=None):
    """Coupled-oscillator partition function in its Gamma-function form,
    log[hbar beta w0 prod_i Gamma(hbar beta lambda_i / 2pi) / (4 pi^2 Gamma(hbar beta wD / 2pi))]."""
    beta = _check_beta(beta)
    return _out(np.asarray(log_ztilde_renormalized(beta, p, roots)) - beta * epsilon0(p, roots))


def dlog_ztilde_renormalized(beta, p, roots=None):
    """d/dbeta of :func:`log_ztilde_renormalized`."""
    beta = _check_beta(beta)
    lam = _root_array(p, roots)
    return _out(p.hbar / TWO_PI * _binet_sum(beta, p, lam, 1))


def d2log_ztilde_renormalized(beta, p, roots=None):
    """d^2/dbeta^2 of :func:`log_ztilde_renormalized`."""
    beta = _check_beta(beta)
    lam = _root_array(p, roots)
    return _out((p.hbar / TWO_PI) ** 2 * _binet_sum(beta, p, lam, 2))


def interaction_rhs(beta, p, roots=None):
    """Right-hand side of the renormalized equilibrium condition.

    Vanishes identically at gamma = 0 and tends to zero as beta -> infinity.
    """
    beta = _check_beta(beta)
    return _out(
        -np.asarray(dlog_ztilde_renormalized(beta, p, roots))
        + np.asarray(dlog_za_renormalized(beta, p))
    )


def saddle_function(beta, E, p, roots=None):
    """f(beta) = E - 6 kappa zeta(4) / (hbar^3 beta^4) - RHS(beta).

    ``E`` is measured from the renormalized ground state.  f increases from
    -inf (beta -> 0+) to E (beta -> inf); its root is beta(E, gamma).
    """
    if not E >= 0:
        raise DomainError("E must be >= 0 on the renormalized scale")
    beta = _check_beta(beta)
    return _out(
        E + np.asarray(dlog_zb_thermal(beta, p)) - np.asarray(interaction_rhs(beta, p, roots))
    )


def log_z_total(beta, p, roots=None):
    """Renormalized log Z_AB used in the entropy: bath thermal part plus the
    coupled oscillator minus the bare central oscillator."""
    beta = _check_beta(beta)
    return _out(
        np.asarray(log_zb_thermal(beta, p))
        + np.asarray(log_ztilde_renormalized(beta, p, roots))
        - np.asarray(log_za_renormalized(beta, p))
    )
