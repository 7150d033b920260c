"""Dense symmetric linear algebra shared by every estimation stage

All routines are pure functions on numpy arrays. Every spectral operation goes
through ``eigh`` so that ordering and eigenvector signs are fixed and repeated
runs are bitwise identical.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from .errors import InvalidInput, NearSingular, NotPSD

SymMatrix = NDArray[np.float64]

SYMMETRY_TOL = 1e-10
NEAR_SINGULAR_TOL = 1e-14
PSD_REL_TOL = 1e-8
PSD_ABS_TOL = 1e-12


@dataclass(frozen=True)
class EigenDecomp:
    """Eigendecomposition of a symmetric matrix

    Attributes:
        values: Eigenvalues sorted descending
        vectors: Orthonormal eigenvectors as columns, matching ``values``
    """
    values: NDArray[np.float64]
    vectors: NDArray[np.float64]

    def rebuild(self, values: NDArray[np.float64]) -> SymMatrix:
        """Return V diag(values) V^T, symmetrized"""
        m = (self.vectors * values) @ self.vectors.T
        return (m + m.T) / 2.0


def as_symmetric(m) -> SymMatrix:
    """Validate a square finite matrix and return its symmetrized copy

    The asymmetry tolerance is relative to the entry scale, since Gram products
    can carry entries far above one.

    Raises:
        InvalidInput: If the matrix is not square, not finite, or not symmetric
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInput(f"Expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput("Matrix contains non-finite entries")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if m.size and np.max(np.abs(m - m.T)) > SYMMETRY_TOL * scale:
        raise InvalidInput("Matrix is not symmetric")
    return (m + m.T) / 2.0


def centering_matrix(n: int) -> SymMatrix:
    """Q = I - 11^T / n"""
    return np.eye(n) - np.ones((n, n)) / n


def eigh(m) -> EigenDecomp:
    """Full symmetric eigendecomposition with deterministic ordering

    Values are sorted descending (stable for ties). Each eigenvector is signed
    so that its largest-magnitude entry is positive; ``argmax`` resolves
    magnitude ties to the lowest index.

    Raises:
        InvalidInput: If the matrix has non-finite entries
    """
    sym = as_symmetric(m)
    if sym.shape[0] == 0:
        return EigenDecomp(values=np.zeros(0), vectors=np.zeros((0, 0)))
    values, vectors = linalg.eigh(sym)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]

    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    vectors = vectors * signs
    return EigenDecomp(values=values, vectors=vectors)


def reg_inverse(m, eps: float) -> SymMatrix:
    """Tikhonov-regularized inverse (m + eps I)^-1

    Raises:
        InvalidInput: If eps is not positive
        NearSingular: If the smallest shifted eigenvalue is <= 1e-14
    """
    if not eps > 0:
        raise InvalidInput(f"Regularizer must be > 0, got {eps}")
    decomp = eigh(m)
    shifted = decomp.values + eps
    if shifted.size and shifted.min() <= NEAR_SINGULAR_TOL:
        raise NearSingular(
            f"Smallest eigenvalue {decomp.values.min():.3e} plus eps {eps:.3e} is numerically zero"
        )
    return decomp.rebuild(1.0 / shifted)


def pseudo_inverse(m, rel_tol: float = 1e-10) -> SymMatrix:
    """Moore-Penrose inverse of a symmetric matrix

    Eigenvalues with |lambda| <= rel_tol * max|lambda| are treated as zero.
    A matrix with no eigenvalue above tolerance yields the zero matrix.
    """
    if not 0 < rel_tol < 1:
        raise InvalidInput(f"rel_tol must be in (0, 1), got {rel_tol}")
    decomp = eigh(m)
    if decomp.values.size == 0:
        return np.zeros((0, 0))
    cutoff = rel_tol * np.max(np.abs(decomp.values))
    keep = np.abs(decomp.values) > cutoff
    inverted = np.zeros_like(decomp.values)
    inverted[keep] = 1.0 / decomp.values[keep]
    return decomp.rebuild(inverted)


def psd_sqrt(m) -> SymMatrix:
    """Square root of a numerically positive semidefinite matrix

    Eigenvalues are clamped at zero before the square root.

    Raises:
        NotPSD: If an eigenvalue is below -max(1e-8 * lambda_max, 1e-12)
    """
    decomp = eigh(m)
    if decomp.values.size == 0:
        return np.zeros((0, 0))
    lam_max = max(float(decomp.values[0]), 0.0)
    floor = -max(PSD_REL_TOL * lam_max, PSD_ABS_TOL)
    if decomp.values[-1] < floor:
        raise NotPSD(
            f"Eigenvalue {decomp.values[-1]:.3e} below tolerance {floor:.3e} (lambda_max={lam_max:.3e})"
        )
    return decomp.rebuild(np.sqrt(np.clip(decomp.values, 0.0, None)))


def fro_norm(m) -> float:
    """Frobenius norm"""
    return float(np.linalg.norm(np.asarray(m, dtype=float), "fro"))
