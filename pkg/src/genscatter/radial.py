"""Radial Schrodinger, radial Dirac and Dirac-type scattering solvers.

The regular solution is integrated outward with an adaptive Runge-Kutta
method (DOP853 by default) and matched at ``R`` to a pair of asymptotic solutions dressed
with deviation factors.

Matching basis
--------------
Both systems have the form ``Z' = M(r) Z`` with a 2x2 real matrix whose
eigenvalues are ``+-i p(r)``.  The default ``basis="adiabatic"`` uses the
first-order adiabatic (Liouville-Green) solutions

    Z_+-(R) = e_+-(R) exp(+-i Theta(R)) exp(-int_R^inf [mu_+- - omega_+- - d_+-] du)

where ``e_+-`` are eigenvectors of ``M`` normalized so that they tend to
the free directions, ``Theta`` is the free phase plus the deviation phase,
``omega_+-`` is its derivative and ``d_+-`` the diagonal of ``E^{-1} E'``.
The neglected terms are of relative size ``O(R^-2)``, so extracted values
are essentially independent of the matching radius.  ``basis="leading"``
uses the bare leading-order asymptotics (errors ``O(1/R)``) and
``basis="free"`` drops the deviation factor altogether.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .errors import DomainError, IntegrationError, MatchingError, PreconditionError
from .potentials import PotentialSpec

__all__ = [
    "RadialTrajectory",
    "DiracScattering",
    "integrate_schrodinger",
    "deviation_schrodinger",
    "extract_s_schrodinger",
    "match_schrodinger",
    "integrate_dirac",
    "dirac_start",
    "deviation_dirac",
    "extract_s_dirac",
    "integrate_dirac_type",
    "deviation_dirac_type",
    "extract_s_dirac_type",
    "default_r0",
]

BASES = ("adiabatic", "leading", "free")
_MATCH_TOL = 1e-10


@dataclass
class RadialTrajectory:
    """Sampled solution of a radial system.

    ``values[i]`` is ``(y, y')`` for Schrodinger problems and ``(f, g)``
    for Dirac problems, at radius ``grid[i]``.  ``dense`` evaluates the
    solution anywhere in ``[grid[0], grid[-1]]``.
    """

    grid: np.ndarray
    values: np.ndarray
    params: dict
    dense: Optional[Callable] = field(default=None, repr=False)

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]

    def __call__(self, r):
        if self.dense is None:
            raise PreconditionError("trajectory has no dense output")
        return self.dense(r)


def default_r0(scale: float) -> float:
    return min(1e-3 / scale, 1e-3)


def _chunk_edges(r0: float, R: float) -> np.ndarray:
    # doubling chunks, so the absolute tolerance can follow the growth of the
    # solution away from the singular point
    n = max(1, int(math.ceil(math.log2(R / r0))))
    return np.geomspace(r0, R, n + 1)


def _solve(rhs, y0, r0: float, R: float, rtol: float, method: str, keep_dense: bool,
           edges: Optional[np.ndarray] = None):
    if not R > r0:
        raise PreconditionError(f"need R > r0, got r0={r0!r}, R={R!r}")
    if edges is None:
        edges = _chunk_edges(r0, R) if r0 > 0 else np.array([0.0, R])
    y = np.asarray(y0, dtype=float)
    ts, ys, dense = [np.array([edges[0]])], [y[None, :]], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        atol = 1e-4 * rtol * float(np.max(np.abs(y)))
        sol = integrate.solve_ivp(rhs, (lo, hi), y, method=method, rtol=rtol, atol=atol,
                                  dense_output=keep_dense)
        if sol.status != 0:
            raise IntegrationError(f"radial integration failed on [{lo:g}, {hi:g}]: {sol.message}")
        ts.append(sol.t[1:])
        ys.append(sol.y[:, 1:].T)
        if keep_dense:
            dense.append((lo, hi, sol.sol))
        y = sol.y[:, -1]
    grid = np.concatenate(ts)
    values = np.concatenate(ys)

    evaluator = None
    if keep_dense:
        his = np.array([d[1] for d in dense])

        def evaluator(r):
            r_arr = np.atleast_1d(np.asarray(r, dtype=float))
            out = np.empty((r_arr.size, values.shape[1]))
            idx = np.clip(np.searchsorted(his, r_arr), 0, len(dense) - 1)
            for j, (rr, i) in enumerate(zip(r_arr, idx)):
                out[j] = dense[i][2](rr)
            return out[0] if np.ndim(r) == 0 else out

    return grid, values, evaluator


# ---------------------------------------------------------------------------
# Schrodinger


def _schrodinger_rhs(ell: int, k: float, pot: PotentialSpec):
    L = ell * (ell + 1)
    k2 = k * k
    phi = pot.scalar_fn()

    def rhs(r, s):
        return (s[1], -(k2 + phi(r) - L / (r * r)) * s[0])

    return rhs


def _frobenius_schrodinger(ell: int, k: float, pot: PotentialSpec, r0: float,
                           terms: int = 4) -> np.ndarray:
    # y = r^{l+1} sum_n c_n r^n with n (n + 2l + 1) c_n = -2z c_{n-1} - (k^2 + V_reg(0)) c_{n-2};
    # the 2z/r term gives c1 = -z/(l+1)
    two_z = pot.inverse_r_coefficient
    q0 = k * k + float(pot.regular_part(r0))
    c = [1.0]
    for n in range(1, terms):
        prev2 = c[n - 2] if n >= 2 else 0.0
        c.append((-two_z * c[n - 1] - q0 * prev2) / (n * (n + 2 * ell + 1)))
    y = sum(cn * r0 ** (n + ell + 1) for n, cn in enumerate(c))
    dy = sum(cn * (n + ell + 1) * r0 ** (n + ell) for n, cn in enumerate(c))
    return np.array([y, dy])


def _check_common(k: float, R: float) -> None:
    if not k > 0:
        raise PreconditionError(f"k must be positive, got {k!r}")
    if not R > 0:
        raise PreconditionError(f"R must be positive, got {R!r}")


def integrate_schrodinger(ell: int, k: float, pot: PotentialSpec, r0: Optional[float] = None,
                          R: float = 100.0, *, rtol: float = 1e-10, method: str = "DOP853",
                          dense: bool = False, y0=None) -> RadialTrajectory:
    """Regular solution ``y ~ r^{l+1}`` of ``y'' + (k^2 + V - l(l+1)/r^2) y = 0``.

    ``y0`` overrides the series start ``(y, y')`` at ``r0``.
    """
    if ell < 0 or int(ell) != ell:
        raise PreconditionError("ell must be a nonnegative integer")
    _check_common(k, R)
    ell = int(ell)
    r0 = default_r0(k) if r0 is None else r0
    y0 = _frobenius_schrodinger(ell, k, pot, r0) if y0 is None else np.asarray(y0, dtype=float)
    grid, values, ev = _solve(_schrodinger_rhs(ell, k, pot), y0, r0, R, rtol, method, dense)
    return RadialTrajectory(grid, values, {"kind": "schrodinger", "ell": ell, "k": k}, ev)


def deviation_schrodinger(r: float, k: float, pot: PotentialSpec) -> complex:
    """Stationary deviation factor ``exp((i/2k) int_a^r V)``."""
    if not k > 0:
        raise PreconditionError("k must be positive")
    if not r > 0:
        raise DomainError("r must be positive")
    return cmath.exp(0.5j / k * pot.antiderivative(r))


def _tail_integral(fn: Callable[[float], complex], R: float) -> complex:
    opts = dict(epsabs=1e-13, epsrel=1e-11, limit=400)
    re, _ = integrate.quad(lambda u: fn(u).real, R, np.inf, **opts)
    im, _ = integrate.quad(lambda u: fn(u).imag, R, np.inf, **opts)
    return complex(re, im)


def _schrodinger_basis(ell: int, k: float, pot: PotentialSpec, R: float, basis: str):
    """Outgoing asymptotic solution ``(y, y')`` at R; the incoming one is its conjugate."""
    L = ell * (ell + 1)
    theta = k * R - 0.5 * ell * math.pi
    if basis == "free":
        return cmath.exp(1j * theta) * np.array([1.0, 1j * k])
    phase = theta + 0.5 / k * pot.antiderivative(R)
    if basis == "leading":
        return cmath.exp(1j * phase) * np.array([1.0, 1j * (k + pot(R) / (2.0 * k))])

    def local(u):
        # kappa = sqrt(Q) with Q = k^2 + V - L/r^2, and its first two derivatives
        phi = pot(u)
        q = k * k + phi - L / (u * u)
        if q <= 0:
            raise MatchingError(f"classically forbidden region beyond R at r={u:g}")
        kap = math.sqrt(q)
        dq = pot.deriv(u) + 2.0 * L / u ** 3
        d2q = pot.deriv2(u) - 6.0 * L / u ** 4
        dkap = dq / (2.0 * kap)
        d2kap = d2q / (2.0 * kap) - dq * dq / (4.0 * kap ** 3)
        # second-order phase-amplitude correction to the local wavenumber
        second = (0.75 * (dkap / kap) ** 2 - 0.5 * d2kap / kap) / (2.0 * kap)
        return phi, kap, dkap, second

    def integrand(u):
        phi, kap, _, second = local(u)
        delta = (phi - L / (u * u)) / (kap + k)
        return (-phi * delta - 2.0 * k * L / (u * u)) / (2.0 * k * (kap + k)) + second

    _, kR, dkR, secondR = local(R)
    rate = kR + secondR
    correction = _tail_integral(lambda u: complex(integrand(u)), R).real
    amp = math.sqrt(k / rate)
    return amp * cmath.exp(1j * (phase - correction)) * np.array([1.0, 1j * rate - dkR / (2.0 * kR)])


def _solve_match(state, z_out) -> tuple[complex, complex]:
    z_in = np.conj(z_out)
    M = np.column_stack([z_in, z_out])
    alpha, beta = np.linalg.solve(M, np.asarray(state, dtype=complex))
    scale = float(np.max(np.abs(state)))
    if abs(alpha) < _MATCH_TOL * scale:
        raise MatchingError(f"incoming coefficient vanishes (|alpha| = {abs(alpha):.3g})")
    return complex(alpha), complex(beta)


def match_schrodinger(ell: int, k: float, pot: PotentialSpec, R: float, *,
                      basis: str = "adiabatic", traj: Optional[RadialTrajectory] = None,
                      **kw) -> tuple[complex, complex]:
    """Coefficients ``(alpha, beta)`` with ``y(R) = alpha Z_in + beta Z_out``."""
    if basis not in BASES:
        raise PreconditionError(f"basis must be one of {BASES}")
    if traj is None:
        traj = integrate_schrodinger(ell, k, pot, R=R, **kw)
    z_out = _schrodinger_basis(int(ell), k, pot, float(traj.grid[-1]), basis)
    return _solve_match(traj.final, z_out)


def extract_s_schrodinger(ell: int, k: float, pot: PotentialSpec, R: float = 2000.0, *,
                          basis: str = "adiabatic", **kw) -> complex:
    """Stationary generalized scattering function ``S_l(k) = -beta/alpha``."""
    alpha, beta = match_schrodinger(ell, k, pot, R, basis=basis, **kw)
    return -beta / alpha


# ---------------------------------------------------------------------------
# Dirac and Dirac-type


@dataclass(frozen=True)
class DiracScattering:
    """Diagonal scattering matrix with the asymptotic amplitude vectors."""

    matrix: np.ndarray
    c1: np.ndarray
    c2: np.ndarray

    @property
    def diagonal(self) -> tuple[complex, complex]:
        return complex(self.matrix[0, 0]), complex(self.matrix[1, 1])


def _eta(lam: float, m: float) -> float:
    if not m > 0:
        raise PreconditionError(f"m must be positive, got {m!r}")
    if not abs(lam) > m:
        raise DomainError(f"need |lambda| > m, got lambda={lam!r}, m={m!r}")
    return math.sqrt(lam * lam - m * m)


def _dirac_rhs(c_fn, w_fn, lam: float, m: float):
    def rhs(r, s):
        c = c_fn(r)
        w = w_fn(r)
        f, g = s
        return (-c * f + (m + lam - w) * g, (m - lam + w) * f + c * g)

    return rhs


def _coulomb_strength(pot: PotentialSpec) -> float:
    # v = -A/r + smooth part
    return -pot.inverse_r_coefficient


def dirac_start(k_quantum: float, lam: float, m: float, pot: PotentialSpec, r0: float,
                terms: int = 4) -> np.ndarray:
    """Series ``r^alpha sum_n (a_n, b_n) r^n`` of the regular solution at ``r0``.

    ``a_0 = 1`` and ``b_0 = (alpha + k)/A``; higher coefficients solve
    ``[[alpha+n+k, -A], [A, alpha+n-k]] (a_n, b_n) = ((m+lam-v0) b_{n-1}, (m-lam+v0) a_{n-1})``
    with ``v0`` the regular part of the potential at the origin.
    """
    A = _coulomb_strength(pot)
    if not A > 0:
        raise PreconditionError(f"the Coulomb strength A must be positive, got {A!r}")
    if not abs(k_quantum) > A:
        raise DomainError(f"need |k| > A, got k={k_quantum!r}, A={A!r}")
    alpha = math.sqrt(k_quantum ** 2 - A ** 2)
    v0 = float(pot.regular_part(r0))
    coef = [np.array([1.0, (alpha + k_quantum) / A])]
    for n in range(1, terms):
        mat = np.array([[alpha + n + k_quantum, -A], [A, alpha + n - k_quantum]])
        a_prev, b_prev = coef[-1]
        coef.append(np.linalg.solve(mat, [(m + lam - v0) * b_prev, (m - lam + v0) * a_prev]))
    return r0 ** alpha * sum(c * r0 ** n for n, c in enumerate(coef))


def integrate_dirac(k_quantum: float, lam: float, m: float, pot: PotentialSpec,
                    r0: Optional[float] = None, R: float = 100.0, *, rtol: float = 1e-10,
                    method: str = "DOP853", dense: bool = False, y0=None) -> RadialTrajectory:
    """Regular solution of the radial Dirac system with ``v = pot``.

    ``y0`` overrides the series start (used to build a second, independent
    solution for determinant checks).
    """
    eta = _eta(lam, m)
    _check_common(eta, R)
    r0 = default_r0(eta) if r0 is None else r0
    start = dirac_start(k_quantum, lam, m, pot, r0) if y0 is None else np.asarray(y0, float)
    kq = float(k_quantum)
    rhs = _dirac_rhs(lambda r: kq / r, pot.scalar_fn(), lam, m)
    grid, values, ev = _solve(rhs, start, r0, R, rtol, method, dense)
    params = {"kind": "dirac", "k_quantum": kq, "lambda": lam, "m": m}
    return RadialTrajectory(grid, values, params, ev)


def deviation_dirac(r: float, lam: float, m: float, pot: PotentialSpec) -> complex:
    """Deviation factor ``exp(i (lambda/eta) int_a^r v)`` of the radial Dirac system."""
    eta = _eta(lam, m)
    if not r > 0:
        raise DomainError("r must be positive")
    return cmath.exp(1j * lam / eta * pot.antiderivative(r))


def deviation_dirac_type(r: float, lam: float, m: float, b_fn: PotentialSpec) -> complex:
    """Dirac-type deviation factor, with the lower integration limit fixed at 1."""
    eta = _eta(lam, m)
    if not r > 0:
        raise DomainError("r must be positive")
    return cmath.exp(1j * lam / eta * b_fn.integral(1.0, r))


def _dirac_basis(c_fn, dc_fn, pot_w: PotentialSpec, w_integral: Callable[[float], float],
                 lam: float, m: float, R: float, basis: str):
    """Outgoing asymptotic spinor at R; the incoming one is its conjugate."""
    eta = _eta(lam, m)
    u_out = np.array([-1j * (lam + m) / eta, 1.0])
    if basis == "free":
        return cmath.exp(1j * eta * R) * u_out
    if basis == "leading":
        # bare deviation factor as written, exp(+i (lambda/eta) int v)
        return cmath.exp(1j * (eta * R + lam / eta * w_integral(R))) * u_out

    def pieces(u):
        c, w = c_fn(u), float(pot_w(u))
        p2 = (lam - w) ** 2 - m * m - c * c
        if p2 <= 0:
            raise MatchingError(f"non-oscillatory region beyond R at r={u:g}")
        p = math.sqrt(p2)
        return c, w, p

    def alpha_plus(u):
        c, w, p = pieces(u)
        return (m + lam - w) / (c + 1j * p)

    def integrand(u):
        c, w, p = pieces(u)
        dw = float(pot_w.deriv(u))
        dc = dc_fn(u)
        # p - eta + (lambda/eta) w, arranged without cancellation
        dp = (-2.0 * lam * w + w * w - c * c) / (p + eta)
        phase_rate = (eta * (w * w - c * c) + lam * w * dp) / (eta * (p + eta))
        num = m + lam - w
        den = c + 1j * p
        dpdu = (-(lam - w) * dw - c * dc) / p
        dalpha = (-dw * den - num * (dc + 1j * dpdu)) / (den * den)
        ap = num / den
        d_plus = dalpha / (ap - ap.conjugate())
        return 1j * phase_rate - d_plus

    theta = eta * R - lam / eta * w_integral(R)
    e_plus = np.array([alpha_plus(R), 1.0])
    correction = _tail_integral(integrand, R)
    return cmath.exp(1j * theta - correction) * e_plus


def _asymptotic_directions(lam: float, m: float):
    eta = _eta(lam, m)
    u_in = np.array([1j * (lam + m) / eta, 1.0])
    return u_in, u_in.conj()


def extract_s_dirac(k_quantum: float, lam: float, m: float, pot: PotentialSpec,
                    R: float = 1000.0, *, basis: str = "adiabatic",
                    traj: Optional[RadialTrajectory] = None, **kw) -> DiracScattering:
    """Diagonal scattering matrix of the radial Dirac system."""
    if basis not in BASES:
        raise PreconditionError(f"basis must be one of {BASES}")
    if traj is None:
        traj = integrate_dirac(k_quantum, lam, m, pot, R=R, **kw)
    R = float(traj.grid[-1])
    kq = float(k_quantum)
    z_out = _dirac_basis(lambda u: kq / u, lambda u: -kq / (u * u), pot,
                         pot.antiderivative, lam, m, R, basis)
    return _normalized_result(traj.final, z_out, lam, m)


def _normalized_result(state, z_out, lam, m) -> DiracScattering:
    alpha, beta = _solve_match(state, z_out)
    # rescale so that alpha and beta multiply the limiting directions u_in, u_out;
    # z_out[1] tends to a pure phase, and its modulus is the amplitude factor
    amp = abs(z_out[1])
    u_in, u_out = _asymptotic_directions(lam, m)
    c1 = alpha * amp * u_in
    c2 = beta * amp * u_out
    c11 = c1[0]
    ratio = c11.conjugate() / c11
    return DiracScattering(np.diag([-ratio, ratio]).astype(complex), c1, c2)


def integrate_dirac_type(a_fn: PotentialSpec, b_fn: PotentialSpec, lam: float, m: float,
                         R: float = 100.0, *, rtol: float = 1e-10, method: str = "DOP853",
                         dense: bool = False, y0=(0.0, 1.0)) -> RadialTrajectory:
    """Solution of the Dirac-type system from ``(f, g)(0) = y0`` (default ``(0, 1)``)."""
    eta = _eta(lam, m)
    _check_common(eta, R)
    rhs = _dirac_rhs(a_fn.scalar_fn(), b_fn.scalar_fn(), lam, m)
    edges = np.concatenate([[0.0], _chunk_edges(min(1.0, R / 2), R)]) if R > 1.0 else None
    grid, values, ev = _solve(rhs, np.asarray(y0, float), 0.0, R, rtol, method, dense, edges)
    return RadialTrajectory(grid, values, {"kind": "dirac_type", "lambda": lam, "m": m}, ev)


def extract_s_dirac_type(a_fn: PotentialSpec, b_fn: PotentialSpec, lam: float, m: float,
                         R: float = 1000.0, *, basis: str = "adiabatic",
                         traj: Optional[RadialTrajectory] = None, **kw) -> DiracScattering:
    """Diagonal scattering matrix of the Dirac-type system."""
    if basis not in BASES:
        raise PreconditionError(f"basis must be one of {BASES}")
    if traj is None:
        traj = integrate_dirac_type(a_fn, b_fn, lam, m, R=R, **kw)
    R = float(traj.grid[-1])
    z_out = _dirac_basis(lambda u: float(a_fn(u)), lambda u: float(a_fn.deriv(u)), b_fn,
                         lambda r: b_fn.integral(1.0, r), lam, m, R, basis)
    return _normalized_result(traj.final, z_out, lam, m)
