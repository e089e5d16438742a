"""Rates of the Drude-damped oscillator.

The Matsubara denominator ``(w0^2 + nu^2)(wD + nu) + nu*gamma*wD`` factors
as ``prod_i (nu + lambda_i)``, i.e. the lambda_i are the roots of

    lambda^3 - wD lambda^2 + (w0^2 + gamma wD) lambda - w0^2 wD = 0.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams

ALL_REAL = "all-real"
COMPLEX_PAIR = "one-real-pair-conjugate"


@dataclass(frozen=True)
class CubicRoots:
    lambda1: complex
    lambda2: complex
    lambda3: complex
    discriminant_sign: str

    def as_array(self):
        return np.array([self.lambda1, self.lambda2, self.lambda3], dtype=complex)

    def __iter__(self):
        return iter((self.lambda1, self.lambda2, self.lambda3))


def drude_coefficients(omega0, omegaD, gamma):
    """Monic coefficients ``[1, a2, a1, a0]`` of the rate cubic."""
    return np.array([1.0, -omegaD, omega0**2 + gamma * omegaD, -(omega0**2) * omegaD])


def _discriminant(c):
    a, b, cc, d = c
    return 18 * a * b * cc * d - 4 * b**3 * d + b**2 * cc**2 - 4 * a * cc**3 - 27 * a**2 * d**2


def _polish(c, r):
    p = np.polyval(c, r)
    dp = np.polyval(np.polyder(c), r)
    if dp != 0:
        step = p / dp
        candidate = r - step
        if abs(np.polyval(c, candidate)) <= abs(p):
            return candidate
    return r


def solve_drude_cubic(omega0, omegaD, gamma):
    """Roots of the Drude rate cubic, ordered by descending (Re, Im)."""
    if not (omega0 > 0 and omegaD > 0 and gamma >= 0):
        raise InvalidParams(
            f"need omega0 > 0, omegaD > 0, gamma >= 0 (got {omega0}, {omegaD}, {gamma})"
        )
    c = drude_coefficients(omega0, omegaD, gamma)
    companion = np.zeros((3, 3))
    companion[0, :] = -c[1:]
    companion[1, 0] = companion[2, 1] = 1.0
    raw = np.linalg.eigvals(companion)

    disc = _discriminant(c)
    scale = max(1.0, omegaD, omega0**2 + gamma * omegaD) ** 4
    if disc > 1e-13 * scale or (abs(disc) <= 1e-13 * scale and np.max(np.abs(raw.imag)) < 1e-6 * np.max(np.abs(raw))):
        kind = ALL_REAL
        roots = np.sort(raw.real)[::-1].astype(complex)
        roots = np.array([_polish(c, r.real) for r in roots], dtype=complex)
    else:
        kind = COMPLEX_PAIR
        i_real = int(np.argmin(np.abs(raw.imag)))
        real_root = _polish(c, raw[i_real].real)
        pair = raw[np.arange(3) != i_real]
        z = _polish(c, complex(pair[np.argmax(pair.imag)]))
        z = complex(z.real, abs(z.imag))
        roots = np.array([real_root, z, z.conjugate()], dtype=complex)

    # Routh-Hurwitz: Re lambda >= 0 whenever gamma >= 0; clip round-off
    roots = np.maximum(roots.real, 0.0) + 1j * roots.imag
    order = np.lexsort((-roots.imag, -roots.real))
    r = roots[order]
    return CubicRoots(complex(r[0]), complex(r[1]), complex(r[2]), kind)


def vieta_residuals(roots, omega0, omegaD, gamma):
    """Relative errors of the three Vieta identities."""
    l1, l2, l3 = roots
    targets = (omegaD, omega0**2 + gamma * omegaD, omega0**2 * omegaD)
    values = (l1 + l2 + l3, l1 * l2 + l1 * l3 + l2 * l3, l1 * l2 * l3)
    return tuple(abs(v - t) / abs(t) for v, t in zip(values, targets))
