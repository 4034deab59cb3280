"""Radial potential descriptions with antiderivative access.

A :class:`PotentialSpec` is a sum of terms.  Each term knows its value, its
derivative and its antiderivative, so deviation factors (which only need
``int_a^r V``) can be evaluated without quadrature whenever a closed form is
known.  Terms without a closed-form antiderivative fall back to adaptive
quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import InadmissiblePotentialError, QuadratureError

__all__ = [
    "CoulombTail",
    "SmoothTail",
    "PotentialSpec",
    "coulomb",
    "dirac_coulomb",
    "inverse_square_tail",
    "inverse_linear_tail",
    "compact_bump",
    "quadrature_tail",
    "zero_potential",
    "bump_function",
]


@dataclass(frozen=True)
class CoulombTail:
    """The long-range term ``2z / r``.

    This is the Schrodinger convention ``U_c(r) = 2z/r``.  The radial Dirac
    potential ``v(r) = -A/r`` is ``CoulombTail(z=-A/2)``.
    """

    z: float

    @property
    def coefficient(self) -> float:
        return 2.0 * self.z

    def __call__(self, r):
        return self.coefficient / np.asarray(r, dtype=float)

    def scalar(self, r: float) -> float:
        return self.coefficient / r

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        return -self.coefficient / (r * r)

    def deriv2(self, r):
        r = np.asarray(r, dtype=float)
        return 2.0 * self.coefficient / (r * r * r)

    def antideriv(self, a: float, r: float) -> float:
        return self.coefficient * math.log(r / a)

    def regular_part(self, r):
        return 0.0 * np.asarray(r, dtype=float)


@dataclass(frozen=True)
class SmoothTail:
    """A potential term that is regular at the origin.

    ``antideriv(a, r)`` must return ``int_a^r eval(u) du``; when it is
    omitted the integral is computed by adaptive quadrature.
    """

    eval: Callable[[float], float]
    antideriv_fn: Optional[Callable[[float, float], float]] = None
    deriv_fn: Optional[Callable[[float], float]] = None
    name: str = "smooth"
    scalar_fn: Optional[Callable[[float], float]] = None

    coefficient = 0.0

    def __call__(self, r):
        return self.eval(r)

    def scalar(self, r: float) -> float:
        if self.scalar_fn is not None:
            return self.scalar_fn(r)
        return float(self.eval(r))

    def deriv(self, r):
        if self.deriv_fn is not None:
            return self.deriv_fn(r)
        r = np.asarray(r, dtype=float)
        h = 1e-5 * np.maximum(1.0, np.abs(r))
        return (self.eval(r + h) - self.eval(r - h)) / (2.0 * h)

    def deriv2(self, r):
        r = np.asarray(r, dtype=float)
        h = 1e-4 * np.maximum(1.0, np.abs(r))
        return (self.deriv(r + h) - self.deriv(r - h)) / (2.0 * h)

    def antideriv(self, a: float, r: float) -> float:
        if self.antideriv_fn is not None:
            return float(self.antideriv_fn(a, r))
        return quad_antiderivative(self.eval, a, r)

    def regular_part(self, r):
        return self.eval(r)


def quad_antiderivative(fn: Callable[[float], float], a: float, r: float) -> float:
    """``int_a^r fn(u) du`` by adaptive quadrature on log-spaced panels."""
    if r == a:
        return 0.0
    sign = 1.0
    lo, hi = a, r
    if hi < lo:
        lo, hi, sign = hi, lo, -1.0
    if lo > 0 and hi / lo > 10.0:
        edges = np.geomspace(lo, hi, int(math.ceil(math.log10(hi / lo))) + 1)
    else:
        edges = np.array([lo, hi])
    total = 0.0
    for x0, x1 in zip(edges[:-1], edges[1:]):
        val, err = integrate.quad(lambda u: float(fn(u)), x0, x1, epsabs=1e-14, epsrel=1e-13, limit=200)
        if err > 1e-10 * max(1.0, abs(val)):
            raise QuadratureError(f"antiderivative on [{x0}, {x1}] did not converge")
        total += val
    return sign * total


@dataclass(frozen=True)
class PotentialSpec:
    """Sum of potential terms with reference point ``a`` for antiderivatives."""

    terms: tuple = field(default_factory=tuple)
    a: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.a > 0:
            raise InadmissiblePotentialError("reference point a must be positive")

    def __add__(self, other: "PotentialSpec") -> "PotentialSpec":
        return PotentialSpec(self.terms + other.terms, a=self.a)

    def with_reference(self, a: float) -> "PotentialSpec":
        return PotentialSpec(self.terms, a=a)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def inverse_r_coefficient(self) -> float:
        """Coefficient ``c`` of the ``c / r`` part of the potential."""
        return sum(t.coefficient for t in self.terms)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for t in self.terms:
            out = out + t(r)
        return out if out.ndim else float(out)

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for t in self.terms:
            out = out + t.deriv(r)
        return out if out.ndim else float(out)

    def deriv2(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for t in self.terms:
            out = out + t.deriv2(r)
        return out if out.ndim else float(out)

    def scalar_fn(self) -> Callable[[float], float]:
        """Fast float -> float evaluator, for use inside ODE right-hand sides."""
        parts = [t.scalar for t in self.terms]
        if not parts:
            return lambda r: 0.0
        if len(parts) == 1:
            return parts[0]
        return lambda r: sum(p(r) for p in parts)

    def regular_part(self, r):
        """The potential with its ``c / r`` terms removed."""
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for t in self.terms:
            out = out + t.regular_part(r)
        return out if out.ndim else float(out)

    def integral(self, lo: float, hi: float) -> float:
        """``int_lo^hi V(u) du`` for ``0 < lo, hi``."""
        return sum(t.antideriv(lo, hi) for t in self.terms)

    def antiderivative(self, r: float) -> float:
        """``int_a^r V(u) du``."""
        return self.integral(self.a, r)

    def check_antiderivatives(self, points: Sequence[float], tol: float = 1e-10) -> float:
        """Largest mismatch between closed-form antiderivatives and quadrature."""
        worst = 0.0
        for t in self.terms:
            for r in points:
                exact = t.antideriv(self.a, r)
                numeric = quad_antiderivative(t, self.a, r)
                worst = max(worst, abs(exact - numeric) / max(1.0, abs(numeric)))
        if worst > tol:
            raise InadmissiblePotentialError(
                f"antiderivative disagrees with quadrature by {worst:.3g}"
            )
        return worst

    def check_admissible(self) -> None:
        """Cheap numerical screen for the decay and integrability conditions.

        Requires finite values, ``r |V_reg(r)| -> 0`` at the origin and
        ``V_reg(r)`` decaying faster than ``r^{-1/2}`` at large r.
        """
        probe = np.geomspace(1e-6, 1e6, 49)
        vals = np.asarray(self.regular_part(probe), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise InadmissiblePotentialError("potential is not finite on (0, inf)")
        small = probe < 1e-3
        if np.any(np.abs(vals[small] * probe[small]) > 1e-2 * (1.0 + np.abs(vals).max())):
            raise InadmissiblePotentialError("r * V(r) does not vanish at the origin")
        tail = np.abs(vals[-8:]) * np.sqrt(probe[-8:])
        if tail[-1] > 1e-3 and tail[-1] >= tail[0]:
            raise InadmissiblePotentialError("potential does not decay fast enough at infinity")


# ---------------------------------------------------------------------------
# built-in families


def zero_potential(a: float = 1.0) -> PotentialSpec:
    return PotentialSpec((), a=a)


def coulomb(z: float, a: float = 1.0) -> PotentialSpec:
    """Schrodinger Coulomb tail ``2z/r``."""
    return PotentialSpec((CoulombTail(z),), a=a)


def dirac_coulomb(A: float, a: float = 1.0) -> PotentialSpec:
    """Dirac Coulomb potential ``v(r) = -A/r``."""
    return PotentialSpec((CoulombTail(-0.5 * A),), a=a)


def inverse_square_tail(c: float = 1.0, a: float = 1.0) -> PotentialSpec:
    """``c / (1 + r)^2``."""
    return PotentialSpec(
        (
            SmoothTail(
                eval=lambda r: c / (1.0 + np.asarray(r, dtype=float)) ** 2,
                antideriv_fn=lambda lo, hi: c * (1.0 / (1.0 + lo) - 1.0 / (1.0 + hi)),
                deriv_fn=lambda r: -2.0 * c / (1.0 + np.asarray(r, dtype=float)) ** 3,
                name=f"{c:g}/(1+r)^2",
                scalar_fn=lambda r: c / ((1.0 + r) * (1.0 + r)),
            ),
        ),
        a=a,
    )


def inverse_linear_tail(c: float = 1.0, a: float = 1.0) -> PotentialSpec:
    """``c / (1 + r)``: long range, logarithmic phase."""
    return PotentialSpec(
        (
            SmoothTail(
                eval=lambda r: c / (1.0 + np.asarray(r, dtype=float)),
                antideriv_fn=lambda lo, hi: c * math.log((1.0 + hi) / (1.0 + lo)),
                deriv_fn=lambda r: -c / (1.0 + np.asarray(r, dtype=float)) ** 2,
                name=f"{c:g}/(1+r)",
                scalar_fn=lambda r: c / (1.0 + r),
            ),
        ),
        a=a,
    )


def bump_function(u):
    """``exp(-1/(1-u^2))`` on (-1, 1), zero elsewhere."""
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) < 1.0
    out = np.zeros_like(u)
    w = 1.0 - u[inside] ** 2
    out[inside] = np.exp(-1.0 / w)
    return out if out.ndim else float(out)


def compact_bump(height: float = 1.0, r1: float = 0.0, r2: float = 5.0,
                 a: float = 1.0) -> PotentialSpec:
    """Smooth bump of peak ``height * e`` supported on ``[r1, r2]``.

    There is no elementary antiderivative; integrals are taken by quadrature
    clipped to the support.
    """
    mid, half = 0.5 * (r1 + r2), 0.5 * (r2 - r1)

    def ev(r):
        return height * math.e * bump_function((np.asarray(r, dtype=float) - mid) / half)

    peak = height * math.e

    def scalar(r):
        u = (r - mid) / half
        if abs(u) >= 1.0:
            return 0.0
        return peak * math.exp(-1.0 / (1.0 - u * u))

    def anti(lo, hi):
        sign = 1.0
        if hi < lo:
            lo, hi, sign = hi, lo, -1.0
        lo_c, hi_c = max(lo, r1), min(hi, r2)
        if hi_c <= lo_c:
            return 0.0
        val, _ = integrate.quad(scalar, lo_c, hi_c, epsabs=1e-14, epsrel=1e-13, limit=200)
        return sign * val

    return PotentialSpec((SmoothTail(eval=ev, antideriv_fn=anti, name="bump", scalar_fn=scalar),), a=a)


def quadrature_tail(c: float = 1.0, a: float = 1.0) -> PotentialSpec:
    """``c / (1 + r)^3`` with no closed-form antiderivative attached."""
    return PotentialSpec(
        (SmoothTail(eval=lambda r: c / (1.0 + np.asarray(r, dtype=float)) ** 3,
                    name=f"{c:g}/(1+r)^3", scalar_fn=lambda r: c / (1.0 + r) ** 3),),
        a=a,
    )
