"""Complex log-gamma, digamma and Legendre functions of the second kind.

``log_gamma`` uses a 15-coefficient Lanczos sum (g = 671/128) on the half
plane Re z >= 1/2 and the reflection formula elsewhere.  The branch returned
is the analytic continuation of the real ``ln Gamma`` from the positive axis
with the cut along the negative real axis, i.e. the same branch as
``scipy.special.loggamma``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import integrate

from .errors import DomainError, PoleError, QuadratureError

__all__ = [
    "log_gamma",
    "digamma",
    "legendre_q",
    "legendre_p",
    "legendre_q_closed",
    "EULER_GAMMA",
]

EULER_GAMMA = 0.57721566490153286061
_Q_MAX_ELL = 20

_LANCZOS_G = 671.0 / 128.0
_LANCZOS_COEF = (
    0.999999999999997092,
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

# B_{2n} / (2n) for the digamma asymptotic series
_DIGAMMA_ASYMP = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)


def _check_pole(z: complex) -> None:
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at z = {z.real:g}")


def _lanczos_log_gamma(z: complex) -> complex:
    # valid for Re z >= 1/2
    ser = _LANCZOS_COEF[0]
    for j, c in enumerate(_LANCZOS_COEF[1:], start=1):
        ser += c / (z + j)
    tmp = z + _LANCZOS_G
    return (z + 0.5) * cmath.log(tmp) - tmp + _HALF_LOG_2PI + cmath.log(ser / z)


def _log_sin_pi(z: complex) -> complex:
    """Branch of log sin(pi z) continuous on Im z > 0, real on (0, 1)."""
    if z.imag < 0.0:
        return _log_sin_pi(z.conjugate()).conjugate()
    if z.imag == 0.0:
        s = math.sin(math.pi * z.real)
        return complex(math.log(abs(s)), 0.0 if s > 0 else math.pi)
    # sin(pi z) = (i/2) exp(-i pi z) (1 - exp(2 pi i z)), |exp(2 pi i z)| < 1
    return complex(-math.log(2.0), 0.5 * math.pi) - 1j * math.pi * z + cmath.log(
        1.0 - cmath.exp(2j * math.pi * z)
    )


def log_gamma(z: complex) -> complex:
    """Principal-branch ``ln Gamma(z)``.

    Raises :class:`PoleError` at nonpositive integers.
    """
    z = complex(z)
    _check_pole(z)
    if z.real >= 0.5:
        return _lanczos_log_gamma(z)
    return _LOG_PI - _log_sin_pi(z) - _lanczos_log_gamma(1.0 - z)


def digamma(z: complex) -> complex:
    """``Gamma'(z) / Gamma(z)``."""
    z = complex(z)
    _check_pole(z)
    if z.real < 0.5:
        # psi(1 - z) - psi(z) = pi cot(pi z)
        return digamma(1.0 - z) - math.pi / cmath.tan(math.pi * z)
    shift = 0.0j
    while z.real < 8.0:
        shift -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0.0j
    power = inv2
    for coef in _DIGAMMA_ASYMP:
        series += coef * power
        power *= inv2
    return shift + cmath.log(z) - 0.5 / z - series


def legendre_p(ell: int, x):
    """Legendre polynomial P_ell by the (stable) upward recurrence."""
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if ell == 0:
        return p_prev
    p = x.copy()
    for n in range(1, ell):
        p_prev, p = p, ((2 * n + 1) * x * p - n * p_prev) / (n + 1)
    return p


def _legendre_w(ell: int, x):
    # W_{ell-1}(x) = sum_{j=1}^{ell} P_{j-1}(x) P_{ell-j}(x) / j
    x = np.asarray(x, dtype=float)
    w = np.zeros_like(x)
    for j in range(1, ell + 1):
        w = w + legendre_p(j - 1, x) * legendre_p(ell - j, x) / j
    return w


def legendre_q_closed(ell: int, x):
    """Closed form ``P_l(x) * atanh(1/x) - W_{l-1}(x)`` for x > 1.

    Cheap and accurate for moderate x (used inside quadrature kernels);
    it loses relative accuracy as x grows because of cancellation, where
    :func:`legendre_q` should be preferred.
    """
    x = np.asarray(x, dtype=float)
    return legendre_p(ell, x) * 0.5 * np.log((x + 1.0) / (x - 1.0)) - _legendre_w(ell, x)


def legendre_q(ell: int, x: float, *, epsrel: float = 1e-12) -> float:
    """Legendre function of the second kind Q_ell(x) for x > 1.

    Evaluated from
    ``Q_l(x) = int_0^inf (x + sqrt(x^2 - 1) cosh u)^(-l-1) du``
    by adaptive quadrature.
    """
    if ell < 0 or int(ell) != ell:
        raise DomainError("ell must be a nonnegative integer")
    ell = int(ell)
    if ell > _Q_MAX_ELL:
        raise DomainError(f"ell must not exceed {_Q_MAX_ELL}, got {ell}")
    x = float(x)
    if not x > 1.0:
        raise DomainError(f"legendre_q requires x > 1, got x = {x!r}")
    root = math.sqrt((x - 1.0) * (x + 1.0))
    n = ell + 1

    def integrand(u: float) -> float:
        # (x + root cosh u)^{-n}, written in log form to avoid overflow
        return math.exp(-n * math.log(x + root * math.cosh(u)))

    # the integrand decays like (root e^u / 2)^{-n}; cut where it is < 1e-30 of its peak
    peak = x + root
    u_max = math.acosh(max(1.0, (peak * 1e30 ** (1.0 / n) - x) / root)) + 1.0
    knee = max(1.0, math.acosh(max(1.0, 2.0 * x / root)))
    pieces = [(0.0, min(knee, u_max)), (min(knee, u_max), u_max)]
    total = 0.0
    err = 0.0
    for lo, hi in pieces:
        if hi <= lo:
            continue
        val, e = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=epsrel, limit=200)
        total += val
        err += e
    if not err <= 1e-9 * abs(total):
        raise QuadratureError(f"Q_{ell}({x}) did not converge (error estimate {err:.3g})")
    return total
