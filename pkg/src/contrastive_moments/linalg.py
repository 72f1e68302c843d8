"""Dense symmetric linear algebra used by the estimator.

The eigensolver is a cyclic Jacobi method. Dimensions in this package stay
in the tens, where Jacobi is fast enough and gives orthonormal
eigenvectors to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EigenPair",
    "InsufficientDataError",
    "NumericalFailureError",
    "DegenerateCovarianceError",
    "symmetrize",
    "mean_cov",
    "sym_eigen",
    "inv_sqrt",
    "top_eigenpair",
]

MAX_SWEEPS = 100
OFFDIAG_TOL = 1e-12
# Off-diagonal entries this small relative to their diagonal are zeroed.
TINY = 1e-300


class InsufficientDataError(ValueError):
    pass


class NumericalFailureError(ArithmeticError):
    pass


class DegenerateCovarianceError(ValueError):
    pass


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray


def symmetrize(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return 0.5 * (M + M.T)


def mean_cov(X):
    """Sample mean and ``1/N``-normalized covariance of the rows of ``X``."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D array")
    n = X.shape[0]
    if n < 2:
        raise InsufficientDataError(f"need at least 2 rows, got {n}")
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = symmetrize(Xc.T @ Xc / n)
    return mean, cov


def _offdiag_norm(A) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.linalg.norm(off))


def _fix_signs(V):
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def sym_eigen(M) -> list[EigenPair]:
    """Full eigendecomposition by cyclic Jacobi sweeps, values descending.

    Each eigenvector is signed so that its largest-magnitude entry is
    positive.
    """
    A = symmetrize(M).copy()
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    d = A.shape[0]
    V = np.eye(d)
    target = OFFDIAG_TOL * float(np.linalg.norm(A))

    for _ in range(MAX_SWEEPS + 1):
        off = _offdiag_norm(A)
        if off <= target:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                if abs(apq) <= TINY * (abs(A[p, p]) + abs(A[q, q])):
                    A[p, q] = A[q, p] = 0.0
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ap = A[:, p].copy()
                aq = A[:, q]
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap = A[p, :].copy()
                aq = A[q, :]
                A[p, :] = c * ap - s * aq
                A[q, :] = s * ap + c * aq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise NumericalFailureError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")

    values = np.diag(A).copy()
    order = np.argsort(-values, kind="stable")
    V = _fix_signs(V[:, order])
    return [EigenPair(float(values[i]), V[:, j].copy()) for j, i in enumerate(order)]


def top_eigenpair(M) -> EigenPair:
    return sym_eigen(M)[0]


def inv_sqrt(M, floor: float | None = None) -> np.ndarray:
    """Inverse square root of a PSD matrix.

    Eigenvalues below ``floor`` (default ``1e-12 * lambda_max``) are raised
    to the floor before inversion so numerically-null directions are not
    amplified.
    """
    pairs = sym_eigen(M)
    values = np.array([p.value for p in pairs])
    lam_max = values[0]
    if lam_max <= 0:
        raise DegenerateCovarianceError("covariance has no positive eigenvalue")
    if values[-1] < -1e-10 * max(1.0, lam_max):
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {values[-1]:.3g})")
    if floor is None:
        floor = 1e-12 * lam_max
    V = np.column_stack([p.vector for p in pairs])
    scale = 1.0 / np.sqrt(np.maximum(values, floor))
    return symmetrize((V * scale) @ V.T)
