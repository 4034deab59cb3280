"""Momentum-space Dirac matrices, spectral projectors and structure checks.

The negative-energy eigenvectors are used as given.  The positive-energy
pair has a ``1/(m - lambda)`` factor that blows up as ``q -> 0``; it is
rescaled by ``|q| / (m + lambda)`` before orthonormalization, which
removes the singularity.  Below ``|q| = 1e-10`` the canonical coordinate
planes are used.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PreconditionError

__all__ = [
    "Momentum3",
    "SpectralDecomposition",
    "h_matrix",
    "eigenvectors",
    "eigensystem",
    "h_hat_matrix",
    "big_eigenvectors",
    "big_eigensystem",
    "check_structure",
    "corollary_modulus",
    "operator_norm",
    "matrix_to_json",
    "matrix_from_json",
]

_Q_ZERO = 1e-10
_UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class Momentum3:
    q1: float
    q2: float
    q3: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.q1, self.q2, self.q3)):
            raise PreconditionError("momentum components must be finite")

    @property
    def norm(self) -> float:
        return math.sqrt(self.q1 ** 2 + self.q2 ** 2 + self.q3 ** 2)

    @classmethod
    def of(cls, q) -> "Momentum3":
        if isinstance(q, Momentum3):
            return q
        q1, q2, q3 = (float(c) for c in q)
        return cls(q1, q2, q3)


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalue_neg: float
    eigenvalue_pos: float
    projector_neg: np.ndarray
    projector_pos: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.eigenvalue_neg * self.projector_neg + self.eigenvalue_pos * self.projector_pos


def _check_mass(m: float) -> None:
    if not m > 0:
        raise PreconditionError(f"m must be positive, got {m!r}")


def h_matrix(q, m: float) -> np.ndarray:
    """The 4x4 free Dirac Hamiltonian in momentum space."""
    _check_mass(m)
    q = Momentum3.of(q)
    a, b, c = q.q1, q.q2, q.q3
    minus, plus = complex(a, -b), complex(a, b)
    return np.array(
        [
            [m, 0, c, minus],
            [0, m, plus, -c],
            [c, minus, -m, 0],
            [plus, -c, 0, -m],
        ],
        dtype=complex,
    )


def _energy(q: Momentum3, m: float) -> float:
    return math.sqrt(m * m + q.norm ** 2)


def eigenvectors(q, m: float) -> np.ndarray:
    """Columns ``g1..g4``: ``g1, g2`` for ``-E`` and ``g3, g4`` for ``+E``.

    ``g3, g4`` are returned in the rescaled form that stays finite at ``q = 0``
    (they span the same plane as the unscaled vectors whenever ``q != 0``).
    """
    _check_mass(m)
    q = Momentum3.of(q)
    E = _energy(q, m)
    a, b, c = q.q1, q.q2, q.q3
    d = m + E
    g1 = [complex(-a, b) / d, c / d, 0, 1]
    g2 = [-c / d, complex(-a, -b) / d, 1, 0]
    n = q.norm
    if n < _Q_ZERO:
        g3, g4 = [1, 0, 0, 0], [0, 1, 0, 0]
    else:
        g3 = [complex(a, -b) / n, -c / n, 0, n / d]
        g4 = [c / n, complex(a, b) / n, n / d, 0]
    return np.array([g1, g2, g3, g4], dtype=complex).T


def _projector(vectors: np.ndarray) -> np.ndarray:
    basis, _ = np.linalg.qr(vectors)
    return basis @ basis.conj().T


def eigensystem(q, m: float) -> SpectralDecomposition:
    """Eigenvalues ``-+E`` and the orthogonal projectors onto the two eigenplanes."""
    q = Momentum3.of(q)
    E = _energy(q, m)
    g = eigenvectors(q, m)
    if q.norm < _Q_ZERO:
        p_neg = np.diag([0, 0, 1, 1]).astype(complex)
        p_pos = np.diag([1, 1, 0, 0]).astype(complex)
    else:
        p_neg = _projector(g[:, :2])
        p_pos = _projector(g[:, 2:])
    return SpectralDecomposition(-E, E, p_neg, p_pos)


def _double(mat: np.ndarray) -> np.ndarray:
    n = mat.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = mat
    out[n:, n:] = mat
    return out


def h_hat_matrix(q, m: float) -> np.ndarray:
    """Block-diagonal 8x8 doubling of :func:`h_matrix`."""
    return _double(h_matrix(q, m))


def big_eigenvectors(q, m: float) -> np.ndarray:
    """Columns ``G1..G8`` of the doubled problem."""
    g = eigenvectors(q, m)
    out = np.zeros((8, 8), dtype=complex)
    out[:4, :4] = g
    out[4:, 4:] = g
    return out


def big_eigensystem(q, m: float) -> SpectralDecomposition:
    small = eigensystem(q, m)
    return SpectralDecomposition(small.eigenvalue_neg, small.eigenvalue_pos,
                                 _double(small.projector_neg), _double(small.projector_pos))


def operator_norm(mat: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(mat, ord=2))


def _require_unitary(S: np.ndarray, tol: float = _UNITARY_TOL) -> None:
    n = S.shape[0]
    defect = operator_norm(S.conj().T @ S - np.eye(n))
    if defect > tol:
        raise PreconditionError(f"matrix is not unitary (defect {defect:.3g})")


def check_structure(S, q, m: float) -> tuple[float, float]:
    """How far ``S`` is from being block diagonal in the energy eigenplanes.

    Returns ``(offblock_norm, block_unitarity_defect)`` where the first is
    ``||P1 S P2|| + ||P2 S P1||`` and the second the largest
    ``||(Pn S Pn)^* (Pn S Pn) - Pn||``.
    """
    S = np.asarray(S, dtype=complex)
    if S.shape not in ((4, 4), (8, 8)):
        raise PreconditionError(f"S must be 4x4 or 8x8, got shape {S.shape}")
    _require_unitary(S)
    dec = eigensystem(q, m) if S.shape[0] == 4 else big_eigensystem(q, m)
    p1, p2 = dec.projector_neg, dec.projector_pos
    offblock = operator_norm(p1 @ S @ p2) + operator_norm(p2 @ S @ p1)
    defect = 0.0
    for p in (p1, p2):
        block = p @ S @ p
        defect = max(defect, operator_norm(block.conj().T @ block - p))
    return offblock, defect


def corollary_modulus(S, k_idx: int, l_idx: int, tol: float = 1e-12) -> float:
    """``|S[k, l]|`` when the rest of row ``k`` and column ``l`` vanish (0-based indices)."""
    S = np.asarray(S, dtype=complex)
    n = S.shape[0]
    if not (0 <= k_idx < n and 0 <= l_idx < n):
        raise PreconditionError(f"indices ({k_idx}, {l_idx}) out of range for a {n}x{n} matrix")
    _require_unitary(S)
    offending = [(k_idx, j) for j in range(n) if j != l_idx and abs(S[k_idx, j]) > tol]
    offending += [(i, l_idx) for i in range(n) if i != k_idx and abs(S[i, l_idx]) > tol]
    if offending:
        listing = ", ".join(f"({i},{j})={abs(S[i, j]):.3g}" for i, j in offending)
        raise PreconditionError(f"row {k_idx} / column {l_idx} have nonzero entries: {listing}")
    return float(abs(S[k_idx, l_idx]))


def matrix_to_json(mat: np.ndarray) -> str:
    """Row-major nested lists of ``[re, im]`` pairs."""
    mat = np.asarray(mat, dtype=complex)
    rows = [[[float(v.real), float(v.imag)] for v in row] for row in mat]
    return json.dumps(rows)


def matrix_from_json(text: str | Sequence) -> np.ndarray:
    rows = json.loads(text) if isinstance(text, str) else text
    try:
        return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed matrix JSON: {exc}") from exc
