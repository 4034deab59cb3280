"""Oscillatory, log-singular quadrature for truncated perturbation terms.

The time integral is done analytically,

    int_tau^t exp(i D t1) dt1 = (exp(i D t) - exp(i D tau)) / (i D),

and the momentum integral is rewritten in the variable ``D = k^2 - p^2``.
Both kernels handled here then take the form

    I = int_{d1}^{d2} [-ln|D| A(D) + B(D)] E(D) dD,   E(D) = (e^{iDt} - e^{iDtau}) / (iD)

with ``A`` and ``B`` smooth.  Near ``D = 0`` the pieces ``-A0 ln|D|``,
``-A1 D ln|D|`` and ``B0`` are integrated in closed form (sine and cosine
integrals and their log-weighted relatives); the remainder is bounded after
division by ``D`` and goes to QUADPACK's Fourier-weight routine.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special

from .coulomb import CoulombParams
from .errors import DegenerateDesignError, PreconditionError, QuadratureError
from .specfun import EULER_GAMMA, _legendre_w, legendre_p

__all__ = [
    "TestFunction",
    "GrowthFit",
    "bump",
    "s1_truncated",
    "s2_example",
    "fit_log_growth",
    "regularize_by_deviation",
    "coupling_coefficient",
    "oscillatory_log_integral",
]

_QUAD_LIMIT = 400
_SMALL_D = 1e-7


@dataclass(frozen=True)
class TestFunction:
    """A smooth function supported in ``[c1, c2]`` with ``0 < c1 < c2``."""

    evaluation: Callable[[float], float]
    c1: float
    c2: float

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if not 0 < self.c1 < self.c2 < math.inf:
            raise PreconditionError(f"support must satisfy 0 < c1 < c2, got [{self.c1}, {self.c2}]")

    def __call__(self, p: float) -> float:
        if p <= self.c1 or p >= self.c2:
            return 0.0
        return float(self.evaluation(p))


def bump(c1: float = 0.5, c2: float = 2.0) -> TestFunction:
    """``exp(-1/(1-u^2))`` rescaled from ``(-1, 1)`` onto ``(c1, c2)``."""
    mid, half = 0.5 * (c1 + c2), 0.5 * (c2 - c1)

    def ev(p):
        u = (p - mid) / half
        if abs(u) >= 1.0:
            return 0.0
        return math.exp(-1.0 / (1.0 - u * u))

    return TestFunction(ev, c1, c2)


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    residual: float


# ---------------------------------------------------------------------------
# closed-form moments


def _cin(x: float) -> float:
    """``int_0^x (1 - cos v)/v dv = gamma + ln x - Ci(x)``."""
    if x < 1e-3:
        x2 = x * x
        return x2 / 4.0 - x2 * x2 / 96.0
    return EULER_GAMMA + math.log(x) - float(special.sici(x)[1])


def _si(x: float) -> float:
    return float(special.sici(x)[0])


_SPLIT = 20.0


def _qawf(fn, lo: float, weight: str) -> float:
    val, err = integrate.quad(fn, lo, np.inf, weight=weight, wvar=1.0, limlst=200, limit=_QUAD_LIMIT,
                              epsabs=1e-14)
    if not err <= 1e-10 * max(1.0, abs(val)):
        raise QuadratureError(f"Fourier tail integral from {lo:g} did not converge")
    return val


@lru_cache(maxsize=None)
def _fc_split() -> tuple[float, float]:
    head, _ = integrate.quad(lambda v: math.log(v) * (1.0 - math.cos(v)) / v, 0.0, _SPLIT,
                             epsabs=1e-14, epsrel=1e-12, limit=_QUAD_LIMIT)
    tail = _qawf(lambda v: math.log(v) / v, _SPLIT, "cos")
    return head, tail


def _log_sin_integral(x: float) -> float:
    """``F_s(x) = int_0^x ln v sin v / v dv``; the full integral is ``-gamma pi / 2``."""
    if x <= 0.0:
        return 0.0
    if x <= _SPLIT:
        val, _ = integrate.quad(lambda v: math.log(v) * math.sin(v) / v, 0.0, x,
                                epsabs=1e-14, epsrel=1e-12, limit=_QUAD_LIMIT)
        return val
    return -0.5 * EULER_GAMMA * math.pi - _qawf(lambda v: math.log(v) / v, x, "sin")


def _log_cos_integral(x: float) -> float:
    """``F_c(x) = int_0^x ln v (1 - cos v) / v dv``."""
    if x <= 0.0:
        return 0.0
    if x <= _SPLIT:
        val, _ = integrate.quad(lambda v: math.log(v) * (1.0 - math.cos(v)) / v, 0.0, x,
                                epsabs=1e-14, epsrel=1e-12, limit=_QUAD_LIMIT)
        return val
    head, tail20 = _fc_split()
    tail_x = _qawf(lambda v: math.log(v) / v, x, "cos")
    return head + 0.5 * (math.log(x) ** 2 - math.log(_SPLIT) ** 2) - (tail20 - tail_x)


def _e1(d: float, s: float) -> complex:
    # (e^{ids} - 1) / (id)
    if d == 0.0:
        return complex(s)
    return (cmath.exp(1j * d * s) - 1.0) / (1j * d)


def _moment_const(d: float, s: float) -> complex:
    """``int_0^d e1(D, s) dD`` for ``d >= 0``."""
    if s == 0.0 or d == 0.0:
        return 0j
    x = d * abs(s)
    return complex(math.copysign(1.0, s) * _si(x), _cin(x))


def _moment_log(d: float, s: float) -> complex:
    """``int_0^d ln(D) e1(D, s) dD``."""
    if s == 0.0 or d == 0.0:
        return 0j
    x = d * abs(s)
    ls = math.log(abs(s))
    re = math.copysign(1.0, s) * (_log_sin_integral(x) - ls * _si(x))
    im = _log_cos_integral(x) - ls * _cin(x)
    return complex(re, im)


def _moment_dlog(d: float, s: float) -> complex:
    """``int_0^d D ln(D) e1(D, s) dD = -i [int_0^d ln D e^{iDs} dD - (d ln d - d)]``."""
    if s == 0.0 or d == 0.0:
        return 0j
    a = abs(s)
    x = d * a
    # int_0^x ln v e^{iv} dv, by parts
    base = -1j * math.log(x) * (cmath.exp(1j * x) - 1.0) - complex(_si(x), _cin(x))
    full = (base - math.log(a) * (cmath.exp(1j * x) - 1.0) / 1j) / a
    if s < 0:
        full = full.conjugate()
    return -1j * (full - (d * math.log(d) - d))


def _singular_part(d1: float, d2: float, s: float, a0: complex, a1: complex, b0: complex) -> complex:
    """``int_{d1}^{d2} [-ln|D|(a0 + a1 D) + b0] e1(D, s) dD`` for ``d1 < 0 < d2``."""
    pos = -a0 * _moment_log(d2, s) - a1 * _moment_dlog(d2, s) + b0 * _moment_const(d2, s)
    m = -d1
    # D -> -u maps e1(D, s) to -e1(u, -s), and D ln|D| e1 to u ln u e1(u, -s)
    neg = a0 * _moment_log(m, -s) - a1 * _moment_dlog(m, -s) - b0 * _moment_const(m, -s)
    return pos + neg


def _fourier(g: Callable[[float], complex], lo: float, hi: float, s: float) -> complex:
    """``int_lo^hi g(D) e^{iDs} dD`` with QUADPACK's oscillatory weights."""
    if hi <= lo:
        return 0j
    opts = dict(limit=_QUAD_LIMIT, epsabs=1e-13, epsrel=1e-11)
    if s == 0.0:
        re, _ = integrate.quad(lambda x: g(x).real, lo, hi, **opts)
        im, _ = integrate.quad(lambda x: g(x).imag, lo, hi, **opts)
        return complex(re, im)
    parts = {}
    errs = []
    for name, fn in (("re", lambda x: g(x).real), ("im", lambda x: g(x).imag)):
        for w in ("cos", "sin"):
            val, err = integrate.quad(fn, lo, hi, weight=w, wvar=s, **opts)
            parts[name, w] = val
            errs.append(err)
    scale = max(1.0, max(abs(v) for v in parts.values()))
    if max(errs) > 1e-8 * scale:
        raise QuadratureError(f"oscillatory quadrature on [{lo:g}, {hi:g}] reached its subdivision limit")
    # (gr + i gi)(cos + i sin)
    return complex(parts["re", "cos"] - parts["im", "sin"], parts["re", "sin"] + parts["im", "cos"])


def _derivative(fn: Callable[[float], float], x: float, h: float) -> float:
    # Richardson-extrapolated central difference
    d1 = (fn(x + h) - fn(x - h)) / (2 * h)
    d2 = (fn(x + h / 2) - fn(x - h / 2)) / h
    return (4 * d2 - d1) / 3


def oscillatory_log_integral(A: Callable[[float], float], B: Callable[[float], float],
                             d1: float, d2: float, t: float, tau: float) -> complex:
    """``int_{d1}^{d2} [-ln|D| A(D) + B(D)] (e^{iDt} - e^{iD tau}) / (iD) dD``."""
    if t == tau or d2 <= d1:
        return 0j

    if not d1 < 0.0 < d2:
        def g(x):
            return (-math.log(abs(x)) * A(x) + B(x)) / (1j * x)

        return _fourier(g, d1, d2, t) - _fourier(g, d1, d2, tau)

    a0, b0 = A(0.0), B(0.0)
    h = 1e-3 * min(-d1, d2, 1.0)
    a1 = _derivative(A, 0.0, h)
    b1 = _derivative(B, 0.0, h)

    def g(x):
        if abs(x) < _SMALL_D:
            # limit of the remainder divided by iD
            return b1 / 1j
        rem = -math.log(abs(x)) * (A(x) - a0 - a1 * x) + (B(x) - b0)
        return rem / (1j * x)

    total = _singular_part(d1, d2, t, a0, a1, b0) - _singular_part(d1, d2, tau, a0, a1, b0)
    for lo, hi in ((d1, 0.0), (0.0, d2)):
        total += _fourier(g, lo, hi, t) - _fourier(g, lo, hi, tau)
    return total


# ---------------------------------------------------------------------------
# the two kernels


def _check_window(t: float, tau: float) -> None:
    if t == tau:
        return
    if not (t > 0 > tau):
        raise PreconditionError(f"need t > 0 > tau, got t={t!r}, tau={tau!r}")


def s1_truncated(k: float, params: CoulombParams, t: float, tau: float, f: TestFunction) -> complex:
    """``(2i/pi) int_tau^t int_0^inf f(p) Q_l(x) e^{i(k^2-p^2)t1} dp dt1`` with ``x = (k^2+p^2)/(2pk)``.

    The Coulomb strength in ``params`` does not enter (the term is the
    coefficient of z); only ``params.ell`` is used.
    """
    if not k > 0:
        raise PreconditionError("k must be positive")
    _check_window(t, tau)
    if t == tau:
        return 0j
    ell = params.ell
    k2 = k * k

    def split(delta: float) -> tuple[float, float]:
        # Q_l(x) = -P_l(x) ln|D| + [2 P_l(x) ln(p+k) - W_{l-1}(x)], dp = dD / (2p)
        p = math.sqrt(k2 - delta)
        fp = f(p)
        if fp == 0.0:
            return 0.0, 0.0
        x = (k2 + p * p) / (2.0 * p * k)
        pl = float(legendre_p(ell, x))
        w = float(_legendre_w(ell, x))
        jac = fp / (2.0 * p)
        return pl * jac, (2.0 * pl * math.log(p + k) - w) * jac

    d1, d2 = k2 - f.c2 ** 2, k2 - f.c1 ** 2
    val = oscillatory_log_integral(lambda d: split(d)[0], lambda d: split(d)[1], d1, d2, t, tau)
    return 2j / math.pi * val


def s2_example(q: float, t: float, tau: float, p_fn: Callable[[float], float] = lambda x: 1.0,
               eps: float = 1.0, f: TestFunction | None = None) -> complex:
    """``(S_2(t, tau) f)(q)`` for the kernel ``eps^2 p(x) p(y) ln|x^2 - y^2|``.

    ``f`` defaults to the bump supported on ``[q/2, 2q]``.
    """
    if not q > 0:
        raise PreconditionError("q must be positive")
    _check_window(t, tau)
    if t == tau:
        return 0j
    f = bump(0.5 * q, 2.0 * q) if f is None else f
    pq = p_fn(q)
    if not pq > 0:
        raise PreconditionError("p must be positive")
    q2 = q * q

    def A(delta: float) -> float:
        # ln|D| f(y) p(y) / (2y), with y = sqrt(q^2 - D); B vanishes
        y = math.sqrt(q2 - delta)
        return -f(y) * p_fn(y) / (2.0 * y)

    d1, d2 = q2 - f.c2 ** 2, q2 - f.c1 ** 2
    val = oscillatory_log_integral(A, lambda d: 0.0, d1, d2, t, tau)
    return -1j * eps * eps * pq * val


# ---------------------------------------------------------------------------
# growth fits and regularization


def fit_log_growth(samples: Sequence[tuple[float, float]]) -> GrowthFit:
    """Least-squares fit ``value ~ slope * ln(scale) + intercept``."""
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[0] < 3 or data.shape[1] != 2:
        raise PreconditionError("need at least three (scale, value) samples")
    scales, values = data[:, 0], data[:, 1]
    if np.any(scales <= 1.0):
        raise PreconditionError("scales must exceed 1")
    if np.ptp(scales) == 0.0:
        raise DegenerateDesignError("all scales are equal")
    design = np.column_stack([np.log(scales), np.ones_like(scales)])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    resid = values - design @ coef
    return GrowthFit(float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid ** 2))))


def regularize_by_deviation(raw: Callable[[float, float], complex],
                            w_plus: Callable[[float], complex],
                            w_minus: Callable[[float], complex]) -> Callable[[float, float], complex]:
    """Dress a two-time function with deviation factors: ``w_plus(t) raw(t, tau) conj(w_minus(tau))``.

    With ``w_plus(t) = |t|^{-iz/k}`` and ``w_minus(tau) = |tau|^{+iz/k}`` this is the
    Coulomb-normalized limit; with ``w_plus = t^{i eps^2 phi}``,
    ``w_minus = |tau|^{-i eps^2 phi}`` it removes a ``-i eps^2 phi ln|t tau|`` drift.
    """
    def dressed(t: float, tau: float) -> complex:
        return w_plus(t) * raw(t, tau) * w_minus(tau).conjugate()

    return dressed


def coupling_coefficient(coefficient: complex, t: float, tau: float,
                         w_plus: Callable[[float, float], complex],
                         w_minus: Callable[[float, float], complex],
                         h: float = 1e-6) -> complex:
    """First-order coefficient in ``g`` of ``w_plus(t;g) (1 + g c) conj(w_minus(tau;g))``.

    ``g`` is the expansion parameter (``z`` for the Coulomb series, ``eps^2``
    for the second-order example); the derivative is taken by a central
    difference.
    """
    def dressed(g: float) -> complex:
        fn = regularize_by_deviation(lambda a, b: 1.0 + g * coefficient,
                                     lambda a: w_plus(a, g), lambda b: w_minus(b, g))
        return fn(t, tau)

    return (dressed(h) - dressed(-h)) / (2.0 * h)
