"""Closed-form Coulomb scattering quantities.

All Gamma ratios are formed as ``exp(log_gamma(a) - log_gamma(b))`` so that
large angular momenta do not overflow.  Note that the first-order term
quoted for the normalized series carries an explicit factor ``z``; the
function :func:`s1_coefficient` returns the z-free coefficient, so the
quoted right-hand side equals ``z * s1_coefficient(k, ell)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, PreconditionError
from .specfun import digamma, legendre_q, log_gamma

__all__ = [
    "CoulombParams",
    "s_dyn",
    "s_st",
    "normalization_factor",
    "coulomb_deviation",
    "kernel_R",
    "s1_coefficient",
]


@dataclass(frozen=True)
class CoulombParams:
    """Coulomb strength ``z``, momentum ``k`` and angular number ``ell``."""

    z: float
    k: float
    ell: int = 0

    def __post_init__(self):
        if not self.k > 0:
            raise PreconditionError(f"k must be positive, got {self.k!r}")
        if not self.z > 0:
            raise PreconditionError(f"z must be positive, got {self.z!r}")
        if self.ell < 0 or int(self.ell) != self.ell:
            raise PreconditionError(f"ell must be a nonnegative integer, got {self.ell!r}")

    @property
    def eta(self) -> float:
        """The ratio ``z / k`` that appears in every Gamma argument."""
        return self.z / self.k


def _gamma_ratio(ell: int, eta: float) -> complex:
    # Gamma(l+1-i eta) / Gamma(l+1+i eta); the arguments are conjugate so
    # the ratio is a pure phase, exp(-2i Im log Gamma(l+1+i eta))
    lg = log_gamma(complex(ell + 1, eta))
    return cmath.exp(-2j * lg.imag)


def normalization_factor(z: float, k: float) -> complex:
    """``(2k)^{4iz/k}``, the ell-independent ratio between dynamical and stationary values."""
    return cmath.exp(1j * (4.0 * z / k) * math.log(2.0 * k))


def s_st(p: CoulombParams) -> complex:
    """Stationary Coulomb scattering function ``Gamma(l+1-iz/k)/Gamma(l+1+iz/k)``."""
    return _gamma_ratio(p.ell, p.eta)


def s_dyn(p: CoulombParams) -> complex:
    """Dynamical generalized scattering function ``(2k)^{4iz/k} S_st``."""
    return normalization_factor(p.z, p.k) * _gamma_ratio(p.ell, p.eta)


def coulomb_deviation(t: float, p: CoulombParams, branch: int = +1) -> complex:
    """Momentum-space Coulomb deviation factor ``|t|^{-+ i z/k}``.

    ``branch=+1`` gives ``|t|^{-iz/k}`` (t -> +inf), ``branch=-1`` gives
    ``|t|^{+iz/k}`` (t -> -inf).
    """
    if t == 0:
        raise DomainError("the Coulomb deviation factor is undefined at t = 0")
    if branch not in (1, -1):
        raise PreconditionError("branch must be +1 or -1")
    return cmath.exp(-1j * branch * p.eta * math.log(abs(t)))


def kernel_R(k: float, p: float, params: CoulombParams) -> float:
    """Momentum-space Coulomb kernel ``-(2z/pi) Q_l((k^2 + p^2) / (2pk))``."""
    if not (k > 0 and p > 0):
        raise PreconditionError("kernel_R requires k > 0 and p > 0")
    if p == k:
        raise DomainError("kernel_R is logarithmically singular at p = k")
    x = (k * k + p * p) / (2.0 * p * k)
    return -(2.0 * params.z / math.pi) * legendre_q(params.ell, x)


def s1_coefficient(k: float, ell: int) -> complex:
    """z-free first-order coefficient ``-(2i/k) (psi(l+1) - 2 ln 2k)``."""
    if not k > 0:
        raise PreconditionError("k must be positive")
    return -2j / k * (digamma(ell + 1).real - 2.0 * math.log(2.0 * k))
