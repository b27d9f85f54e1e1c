"""Dense complex linear algebra for the 2x2 / 4x4 matrices used everywhere else."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITICITY_TOL = 1e-12
PSD_FLOOR = -1e-9


class NumericalError(RuntimeError):
    """A numerically computed quantity violated its tolerance."""


def _frozen(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    a.setflags(write=False)
    return a


ID2 = _frozen(np.eye(2))
ID4 = _frozen(np.eye(4))
PAULI_X = _frozen([[0, 1], [1, 0]])
PAULI_Y = _frozen([[0, -1j], [1j, 0]])
PAULI_Z = _frozen([[1, 0], [0, -1]])


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - dagger(m))) <= tol)


def is_unitary(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m @ dagger(m) - np.eye(m.shape[0]))) <= tol)


def _require_square(m: np.ndarray, dim: int, what: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (dim, dim):
        raise ValueError(f"{what} must be {dim}x{dim}, got shape {m.shape}")
    return m


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two 2x2 matrices."""
    a = _require_square(a, 2, "kron operand")
    b = _require_square(b, 2, "kron operand")
    return np.kron(a, b)


def partial_trace_second(m: np.ndarray) -> np.ndarray:
    """Trace out the second qubit of a 4x4 matrix."""
    m = _require_square(m, 4, "partial_trace_second input")
    return m.reshape(2, 2, 2, 2).trace(axis1=1, axis2=3)


class HermEig(NamedTuple):
    eigenvalues: np.ndarray   # real, ascending
    eigenvectors: np.ndarray  # orthonormal columns


def herm_eig(m: np.ndarray) -> HermEig:
    """Eigendecomposition of a Hermitian matrix (ascending eigenvalues)."""
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m):
        raise ValueError("herm_eig input is not Hermitian")
    w, v = np.linalg.eigh(m)
    return HermEig(w, v)


def sqrt_psd(m: np.ndarray) -> np.ndarray:
    """Positive-semidefinite square root of a Hermitian PSD matrix.

    Eigenvalues in [-1e-9, 0) are treated as floating-point drift and
    clamped to zero; anything below that is a genuine failure.
    """
    w, v = herm_eig(m)
    if w[0] < PSD_FLOOR:
        raise NumericalError(f"matrix is not PSD: min eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ dagger(v)


def rot_sigma2(alpha: float) -> np.ndarray:
    """exp(i*alpha*sigma_y) as the real rotation [[cos a, sin a], [-sin a, cos a]]."""
    return np.cos(alpha) * ID2 + 1j * np.sin(alpha) * PAULI_Y


def xz_observable(alpha: float) -> np.ndarray:
    """Dichotomic observable cos(alpha)*sigma_x + sin(alpha)*sigma_z."""
    return np.cos(alpha) * PAULI_X + np.sin(alpha) * PAULI_Z
