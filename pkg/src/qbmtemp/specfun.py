"""Complex log-Gamma, digamma and a few stable elementary kernels.

Both ``log_gamma`` and ``digamma`` shift the argument upward with the
recurrence Gamma(z+1) = z Gamma(z) until ``Re z >= _SHIFT``, then use the
Stirling (Bernoulli) asymptotic series.  With eight Bernoulli terms and
``|z| >= 10`` the truncation error is below 1e-16, so accuracy is set by
the recurrence sum.
"""
import math

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "log_gamma", "digamma", "trigamma", "stirling_remainder", "coth_stable", "zeta4", "ZETA4", "EULER_GAMMA",
]

ZETA4 = math.pi**4 / 90.0
EULER_GAMMA = 0.57721566490153286061

_SHIFT = 10.0
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_2k for k = 1..8
_BERNOULLI = np.array([
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
])
_LG_COEF = np.array([b / ((2 * k) * (2 * k - 1)) for k, b in enumerate(_BERNOULLI, 1)])
_PSI_COEF = np.array([b / (2 * k) for k, b in enumerate(_BERNOULLI, 1)])

_COTH_SERIES_BELOW = 1e-3


def _as_complex(z):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise DomainError("non-finite complex argument")
    on_pole = (z.imag == 0.0) & (z.real <= 0.0) & (z.real == np.round(z.real))
    if np.any(on_pole):
        raise PoleError(f"Gamma has a pole at {z[on_pole].ravel()[0].real:g}")
    return z


def _shift_up(z):
    """Return (z + n, n) with n the smallest integer making Re(z + n) >= _SHIFT."""
    n = np.maximum(0, np.ceil(_SHIFT - z.real)).astype(int)
    return z + n, n


def _unwrap(out):
    return out[()] if out.ndim == 0 else out


def log_gamma(z):
    """Principal branch of log Gamma(z) for complex (array) ``z``.

    The branch cut lies on the negative real axis; ``log_gamma`` is
    continuous in the open upper and lower half planes, and real for
    positive real ``z``.
    """
    z = _as_complex(z)
    w, n = _shift_up(z)

    # log Gamma(z) = log Gamma(z + n) - sum_{k<n} log(z + k)
    correction = np.zeros_like(z)
    for k in range(int(n.max(initial=0))):
        active = n > k
        correction[active] += np.log(z[active] + k)

    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in _LG_COEF[::-1]:
        series = series * inv2 + c
    out = (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + series * inv
    out = out - correction
    # keep real inputs exactly real
    out = np.where(z.imag == 0.0, out.real + 1j * np.where(z.real > 0, 0.0, out.imag), out)
    return _unwrap(out)


def digamma(z):
    """psi(z) = d/dz log Gamma(z) for complex (array) ``z``."""
    z = _as_complex(z)
    w, n = _shift_up(z)

    correction = np.zeros_like(z)
    for k in range(int(n.max(initial=0))):
        active = n > k
        correction[active] += 1.0 / (z[active] + k)

    inv2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    for c in _PSI_COEF[::-1]:
        series = series * inv2 + c
    out = np.log(w) - 0.5 / w - series * inv2 - correction
    out = np.where(z.imag == 0.0, out.real + 0j, out)
    return _unwrap(out)


def trigamma(z):
    """psi'(z); only used for curvature of the coupled-oscillator log Z."""
    z = _as_complex(z)
    w, n = _shift_up(z)

    correction = np.zeros_like(z)
    for k in range(int(n.max(initial=0))):
        active = n > k
        correction[active] += 1.0 / (z[active] + k) ** 2

    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for b in _BERNOULLI[::-1]:
        series = series * inv2 + b
    out = inv + 0.5 * inv2 + series * inv2 * inv + correction
    out = np.where(z.imag == 0.0, out.real + 0j, out)
    return _unwrap(out)


def stirling_remainder(z, order=0):
    """Binet's function mu(z) = log Gamma(z) - [(z - 1/2) log z - z + log(2pi)/2]
    (``order=0``) or its first or second derivative.

    mu(z) ~ 1/(12 z) is small wherever log Gamma is large, so sums of mu
    stay accurate where the full log Gamma values would cancel.  For
    ``Re z >= 0, |z| >= 10`` the Bernoulli series is used directly;
    elsewhere the Stirling part is subtracted from the full function.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    z = _as_complex(z)
    big = (z.real >= 0) & (np.abs(z) >= _SHIFT)
    zb = np.where(big, z, _SHIFT)
    inv = 1.0 / zb
    inv2 = inv * inv
    coef = (_LG_COEF, _PSI_COEF, _BERNOULLI)[order]
    series = np.zeros_like(zb)
    for c in coef[::-1]:
        series = series * inv2 + c
    # mu = sum c_k z^(1-2k), mu' = -sum B_2k/(2k) z^(-2k), mu'' = sum B_2k z^(-2k-1)
    series = (series * inv, -series * inv2, series * inv2 * inv)[order]

    zs = np.where(big, 1.0, z)
    if order == 0:
        direct = log_gamma(zs) - ((zs - 0.5) * np.log(zs) - zs + _HALF_LOG_2PI)
    elif order == 1:
        direct = digamma(zs) - np.log(zs) + 0.5 / zs
    else:
        direct = trigamma(zs) - 1.0 / zs - 0.5 / (zs * zs)
    out = np.where(big, series, direct)
    out = np.where(z.imag == 0.0, out.real + 0j, out)
    return _unwrap(out)


def coth_stable(x):
    """coth(x) without overflow at large |x| or cancellation near 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x == 0.0):
        raise DomainError("coth is singular at 0")
    small = np.abs(x) < _COTH_SERIES_BELOW
    xs = np.where(small, x, 1.0)
    x2 = xs * xs
    series = 1.0 / xs + xs * (1.0 / 3.0 - x2 * (1.0 / 45.0 - x2 * 2.0 / 945.0))
    xl = np.where(small, 1.0, x)
    out = np.where(small, series, 1.0 / np.tanh(xl))
    return _unwrap(out)


def zeta4():
    """Riemann zeta(4) = pi^4 / 90."""
    return ZETA4
