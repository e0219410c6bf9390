"""Dense complex matrix primitives: Hermitian parts, eigenpairs, norms, Haar unitaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Structural tolerances gate type invariants, not science results.
HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
SKEW_TOL = 1e-10


class MatrixShapeError(ValueError):
    """Input is not a finite square complex matrix of the expected size."""


def as_square_matrix(c, name: str = "matrix") -> np.ndarray:
    """Validate and return ``c`` as a square complex128 array."""
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] < 1:
        raise MatrixShapeError(f"{name} must be square, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise MatrixShapeError(f"{name} has non-finite entries")
    return c


def hermitian_part(c, theta: float = 0.0) -> np.ndarray:
    """Hermitian part of exp(-i*theta)*c, i.e. (e^{-it}c + e^{it}c*)/2."""
    c = as_square_matrix(c)
    rc = np.exp(-1j * float(theta)) * c
    return (rc + rc.conj().T) / 2.0


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    h = as_square_matrix(h)
    scale = max(1.0, float(np.abs(h).max()))
    return float(np.abs(h - h.conj().T).max()) <= tol * scale


def check_hermitian(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    h = as_square_matrix(h)
    if not is_hermitian(h, tol):
        raise ValueError("matrix is not Hermitian within structural tolerance")
    return h


@dataclass(frozen=True)
class EigenPair:
    """Largest eigenvalue of a Hermitian matrix and a unit eigenvector."""

    value: float
    vector: np.ndarray


def top_eigenpair(h) -> EigenPair:
    """Largest eigenvalue and a unit eigenvector of Hermitian ``h``.

    Ties at the top eigenvalue return an arbitrary vector of the top
    eigenspace; callers must depend only on the value or on v*cv set-wise.
    """
    h = check_hermitian(h)
    w, v = np.linalg.eigh(h)
    return EigenPair(float(w[-1]), np.ascontiguousarray(v[:, -1]))


def spectral_norm(c) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(as_square_matrix(c), 2))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed random unitary from QR of a complex Ginibre matrix.

    The triangular factor's diagonal phases are divided out so the
    distribution is exactly Haar rather than merely unitary.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
    return q * ph


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = as_square_matrix(u)
    eye = np.eye(u.shape[0])
    return (
        float(np.linalg.norm(u.conj().T @ u - eye, 2)) <= tol
        and float(np.linalg.norm(u @ u.conj().T - eye, 2)) <= tol
    )


def check_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    u = as_square_matrix(u)
    if not is_unitary(u, tol):
        raise ValueError("matrix is not unitary within structural tolerance")
    return u


def check_skew(k, tol: float = SKEW_TOL) -> np.ndarray:
    """Validate K* = -K within ``tol`` relative to max(1, |K|)."""
    k = as_square_matrix(k, "K")
    scale = max(1.0, float(np.abs(k).max()))
    if float(np.abs(k + k.conj().T).max()) > tol * scale:
        raise ValueError("matrix is not skew-Hermitian within tolerance")
    return k


def retract(u, k, step: float) -> np.ndarray:
    """Move along the unitary group: u * exp(step*K) for skew-Hermitian K.

    Uses the eigendecomposition of the Hermitian matrix iK, so the result is
    unitary to working precision for any step size.
    """
    u = check_unitary(u)
    k = check_skew(k)
    lam, v = np.linalg.eigh(1j * k)
    phases = np.exp(-1j * float(step) * lam)
    return u @ ((v * phases) @ v.conj().T)
