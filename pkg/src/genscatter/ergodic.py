"""Dynamical deviation factors, ergodic equalities and admissibility checks.

The dynamical factors are evaluated along code paths that are separate
from the stationary ones in :mod:`genscatter.radial`: the Schrodinger
factor is computed in the time variable, ``k int_{a/k}^t V(k s) ds``, and
the Dirac-type factor integrates ``b(r s)`` over the time variable.  The
checks then compare the two sides numerically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError, PreconditionError, QuadratureError
from .potentials import PotentialSpec
from .radial import deviation_dirac_type, deviation_schrodinger

__all__ = [
    "DynamicalDeviation",
    "w0_schrodinger",
    "check_ergodic_schrodinger",
    "w0_dirac",
    "DiracErgodicResult",
    "check_ergodic_dirac",
    "c_of_p",
    "check_admissibility",
    "coulomb_dynamical",
]


@dataclass(frozen=True)
class DynamicalDeviation:
    """A scalar unit-modulus phase ``w(t, momentum)``.

    Deviation factors here are multiplication operators in the momentum
    representation, so they commute with the free evolution by construction.
    """

    eval: Callable[[float, float], complex]
    description: str = ""

    def __call__(self, t: float, momentum: float) -> complex:
        return self.eval(t, momentum)


def _time_integral(fn: Callable[[float], float], lo: float, hi: float) -> float:
    if hi == lo:
        return 0.0
    sign = 1.0
    if hi < lo:
        lo, hi, sign = hi, lo, -1.0
    edges = np.geomspace(lo, hi, max(2, int(math.ceil(math.log10(hi / lo))) + 2))
    total = 0.0
    for x0, x1 in zip(edges[:-1], edges[1:]):
        val, err = integrate.quad(fn, x0, x1, epsabs=1e-14, epsrel=1e-13, limit=200)
        if err > 1e-10 * max(1.0, abs(val)):
            raise QuadratureError(f"time integral on [{x0:g}, {x1:g}] did not converge")
        total += val
    return sign * total


def w0_schrodinger(t: float, k: float, pot: PotentialSpec) -> complex:
    """``exp((i/2k) int_a^{tk} V)``, evaluated as ``(i/2) int_{a/k}^{t} V(k s) ds``.

    Closed-form antiderivatives are used when every term provides one;
    otherwise the time integral is done by quadrature.
    """
    if not k > 0:
        raise PreconditionError("k must be positive")
    if t * k < pot.a:
        raise DomainError(f"need t k >= a, got t k = {t * k!r} < a = {pot.a!r}")
    closed = all(getattr(term, "antideriv_fn", True) is not None for term in pot.terms)
    if closed:
        phase = pot.integral(pot.a, t * k) / (2.0 * k)
    else:
        fn = pot.scalar_fn()
        phase = 0.5 * _time_integral(lambda s: fn(k * s), pot.a / k, t)
    return cmath.exp(1j * phase)


def check_ergodic_schrodinger(pot: PotentialSpec, k: float, t_grid: Iterable[float]) -> float:
    """``max |V0(t k, k) - W0(t, k)|`` over the grid."""
    worst = 0.0
    for t in t_grid:
        if t * k < pot.a:
            raise DomainError(f"grid point t={t!r} has t k below a")
        worst = max(worst, abs(deviation_schrodinger(t * k, k, pot) - w0_schrodinger(t, k, pot)))
    return worst


def _group_velocity(p: float, m: float) -> float:
    return p / math.sqrt(p * p + m * m)


def w0_dirac(t: float, p: float, m: float, b_fn: PotentialSpec) -> complex:
    """``exp(i sgn(t) int_1^{|t|} b(r s) dr)`` with ``s = p / sqrt(p^2 + m^2)``."""
    if not abs(t) >= 1:
        raise DomainError(f"need |t| >= 1, got {t!r}")
    s = _group_velocity(p, m)
    # int_1^{|t|} b(r s) dr = (1/s) int_s^{|t| s} b(u) du
    phase = b_fn.integral(s, abs(t) * s) / s
    return cmath.exp(1j * math.copysign(1.0, t) * phase)


def c_of_p(b_fn: PotentialSpec, p: float, m: float) -> complex:
    """``exp(i int_{1/s}^{1} b(r s) dr)``, the constant ratio in the Dirac ergodic equality."""
    s = _group_velocity(p, m)
    fn = b_fn.scalar_fn()
    val = _time_integral(lambda r: fn(r * s), 1.0 / s, 1.0)
    return cmath.exp(1j * val)


@dataclass(frozen=True)
class DiracErgodicResult:
    constancy_deviation: float
    modulus_deviation: float
    c_of_p: complex


def check_ergodic_dirac(b_fn: PotentialSpec, p: float, m: float,
                        t_grid: Sequence[float]) -> DiracErgodicResult:
    """Compare ``V0(t s, sqrt(p^2+m^2))`` with ``W0(t, p)`` along the grid.

    Returns the largest drift of the ratio from its first value, the largest
    modulus defect and the constant ratio itself.
    """
    if not (p > 0 and m > 0):
        raise PreconditionError("need p > 0 and m > 0")
    grid = list(t_grid)
    if not grid or min(grid) < 1:
        raise DomainError("the time grid must be nonempty with t >= 1")
    lam = math.sqrt(p * p + m * m)
    s = p / lam
    ratios = np.array([deviation_dirac_type(t * s, lam, m, b_fn) / w0_dirac(t, p, m, b_fn)
                       for t in grid])
    return DiracErgodicResult(
        float(np.max(np.abs(ratios - ratios[0]))),
        float(np.max(np.abs(np.abs(ratios) - 1.0))),
        complex(ratios[0]),
    )


def coulomb_dynamical(z: float, branch: int = +1) -> DynamicalDeviation:
    """``|t|^{-+ i z/k}`` as a :class:`DynamicalDeviation`."""
    return DynamicalDeviation(lambda t, k: cmath.exp(-1j * branch * z / k * math.log(abs(t))),
                              f"|t|^(-{branch} i {z:g}/k)")


def check_admissibility(w: DynamicalDeviation | Callable[[float, float], complex],
                        k_grid: Iterable[float], tau: float, t: float = 1e6) -> float:
    """``sup_k |w(t + tau, k) / w(t, k) - 1|`` at a large surrogate time ``t``."""
    worst = 0.0
    for k in k_grid:
        worst = max(worst, abs(w(t + tau, k) / w(t, k) - 1.0))
    return worst
