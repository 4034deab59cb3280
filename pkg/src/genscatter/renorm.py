"""Dyson series for matrix interactions and cutoff renormalization of second-order coefficients."""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate

from .errors import DegenerateDesignError, PreconditionError, QuadratureError

__all__ = [
    "MatrixInteraction",
    "dyson_coefficients",
    "dyson_sum",
    "time_ordered_product",
    "DivergenceProfile",
    "fit_divergence_profile",
    "u0_factor",
    "regularized_coefficient",
    "modulus_invariance",
    "read_samples_csv",
    "write_samples_csv",
]

_MAX_ORDER = 12
_IMAG_TOL = 1e-8


@dataclass(frozen=True)
class MatrixInteraction:
    """A Hermitian matrix-valued function of time."""

    eval: Callable[[float], np.ndarray]
    dimension: int

    def __post_init__(self):
        if not 1 <= self.dimension <= 8:
            raise PreconditionError(f"dimension must be in 1..8, got {self.dimension}")

    def __call__(self, t: float) -> np.ndarray:
        return np.asarray(self.eval(t), dtype=complex).reshape(self.dimension, self.dimension)

    def check_hermitian(self, times: Iterable[float], tol: float = 1e-13) -> None:
        for t in times:
            v = self(t)
            if np.max(np.abs(v - v.conj().T)) > tol:
                raise PreconditionError(f"interaction is not Hermitian at t={t!r}")


def dyson_coefficients(V: MatrixInteraction, t0: float, t: float, K: int, *,
                       rtol: float = 1e-13) -> list[np.ndarray]:
    """``S_0 = I`` and ``S_k(t) = -i int_{t0}^t V(u) S_{k-1}(u) du``.

    The nested integrals are solved together as one linear ODE system, so every
    order is evaluated on the same adaptive mesh with dense output.
    """
    if not (isinstance(K, (int, np.integer)) and 0 <= K <= _MAX_ORDER):
        raise PreconditionError(f"K must be an integer in 0..{_MAX_ORDER}, got {K!r}")
    d = V.dimension
    V.check_hermitian(np.linspace(t0, t, 5))
    eye = np.eye(d, dtype=complex)
    if K == 0 or t == t0:
        return [eye] + [np.zeros((d, d), dtype=complex) for _ in range(K)]

    def rhs(u, y):
        prev = np.concatenate([eye[None], y.reshape(K, d, d)[:-1]])
        return (-1j * (V(u) @ prev)).ravel()

    sol = integrate.solve_ivp(rhs, (t0, t), np.zeros(K * d * d, dtype=complex),
                              method="DOP853", rtol=rtol, atol=1e-3 * rtol)
    if not sol.success:
        raise QuadratureError(f"Dyson integration failed: {sol.message}")
    higher = sol.y[:, -1].reshape(K, d, d)
    return [eye] + [higher[j].copy() for j in range(K)]


def dyson_sum(coefficients: Sequence[np.ndarray], eps: float) -> np.ndarray:
    return sum(eps ** k * c for k, c in enumerate(coefficients))


def time_ordered_product(V: MatrixInteraction, t0: float, t: float, eps: float,
                         steps: int = 10_000) -> np.ndarray:
    """Product of ``exp(-i eps V(u_mid) dt)`` over a uniform midpoint grid, later times on the left."""
    dt = (t - t0) / steps
    out = np.eye(V.dimension, dtype=complex)
    for j in range(steps):
        w, U = np.linalg.eigh(V(t0 + (j + 0.5) * dt))
        out = (U * np.exp(-1j * eps * dt * w)) @ U.conj().T @ out
    return out


@dataclass(frozen=True)
class DivergenceProfile:
    """Coefficients of ``phi L^2 + psi L + nu ln L + mu``."""

    phi: float
    psi: float
    nu: float
    mu: float
    residual: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.phi, self.psi, self.nu, self.mu)):
            raise PreconditionError("profile coefficients must be finite")

    def divergent_part(self, L: float) -> float:
        return self.phi * L * L + self.psi * L + self.nu * math.log(L)

    def __call__(self, L: float) -> float:
        return self.divergent_part(L) + self.mu


def fit_divergence_profile(samples: Sequence[tuple[float, complex]]) -> DivergenceProfile:
    """Least-squares fit of ``Im a2(L)`` on ``{L^2, L, ln L, 1}``.

    Samples must be purely imaginary (``|Re a2| <= 1e-8 max(1, |a2|)``).
    The residual stored on the result is the RMS misfit.
    """
    if len(samples) < 6:
        raise PreconditionError(f"need at least 6 samples, got {len(samples)}")
    L = np.array([float(s[0]) for s in samples])
    a2 = np.array([complex(s[1]) for s in samples])
    if np.any(~np.isfinite(L)) or np.any(L <= 1):
        raise PreconditionError("cutoff values must be finite and > 1")
    bad = np.abs(a2.real) > _IMAG_TOL * np.maximum(1.0, np.abs(a2))
    if np.any(bad):
        raise PreconditionError(f"samples are not purely imaginary at L = {L[bad].tolist()}")
    if math.log10(L.max() / L.min()) < 2 - 1e-12:
        raise DegenerateDesignError("cutoff samples must span at least two decades")
    design = np.stack([L * L, L, np.log(L), np.ones_like(L)], axis=1)
    scale = np.abs(design).max(axis=0)
    scaled = design / scale
    if np.linalg.matrix_rank(scaled) < 4:
        raise DegenerateDesignError("sample placement does not determine all four coefficients")
    coef, *_ = np.linalg.lstsq(scaled, a2.imag, rcond=None)
    coef = coef / scale
    resid = float(np.sqrt(np.mean((design @ coef - a2.imag) ** 2)))
    return DivergenceProfile(*(float(c) for c in coef), residual=resid)


def _check_cutoff(L: float) -> None:
    if not L > 1:
        raise PreconditionError(f"cutoff must exceed 1, got {L!r}")


def u0_factor(profile: DivergenceProfile, L: float, eps: float) -> complex:
    """``exp(i eps^2 (phi L^2 + psi L)) L^(i eps^2 nu)``; the constant term is left out."""
    _check_cutoff(L)
    return cmath.exp(1j * eps * eps * profile.divergent_part(L))


def regularized_coefficient(a2: complex, profile: DivergenceProfile, L: float) -> complex:
    _check_cutoff(L)
    return complex(a2) - 1j * profile.divergent_part(L)


def modulus_invariance(s_raw: complex, u0: complex) -> tuple[float, float]:
    if abs(abs(u0) - 1.0) > 1e-12:
        raise PreconditionError(f"renormalizing factor must have unit modulus, got |u0| = {abs(u0)!r}")
    return abs(s_raw), abs(s_raw * u0)


def read_samples_csv(path: str | Path) -> list[tuple[float, complex]]:
    """Read ``L, re_a2, im_a2`` rows; lines starting with ``#`` are skipped."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.lstrip().startswith("#")]
    reader = csv.DictReader(lines)
    missing = {"L", "re_a2", "im_a2"} - set(reader.fieldnames or ())
    if missing:
        raise PreconditionError(f"sample file lacks columns {sorted(missing)}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        try:
            out.append((float(row["L"]), complex(float(row["re_a2"]), float(row["im_a2"]))))
        except (TypeError, ValueError) as exc:
            raise PreconditionError(f"bad sample on data line {lineno}: {exc}") from exc
    return out


def write_samples_csv(path: str | Path, samples: Iterable[tuple[float, complex]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["L", "re_a2", "im_a2"])
        for L, a2 in samples:
            a2 = complex(a2)
            w.writerow([f"{L:.17g}", f"{a2.real:.17g}", f"{a2.imag:.17g}"])
