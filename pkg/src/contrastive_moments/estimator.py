"""Contrastive moments: whitening, re-weighted means and covariance.

Rows ``y`` of the whitened sample are re-weighted by ``exp(alpha * |y|^2)``
with ``alpha < 0``. Two re-weighted means and the top eigenvector of one
re-weighted uncentered covariance are the candidate band normals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import EigenPair, inv_sqrt, mean_cov, sym_eigen, symmetrize, top_eigenpair

__all__ = [
    "AlphaConfig",
    "Whitener",
    "CandidateSet",
    "ZERO_NORM_TOL",
    "whiten",
    "reweighted_mean",
    "reweighted_uncentered_cov",
    "candidates",
    "isotropic_candidates",
]

# Re-weighted means with a smaller norm than this carry no direction.
ZERO_NORM_TOL = 1e-12


@dataclass(frozen=True)
class AlphaConfig:
    alpha1: float = -0.1
    alpha2: float = -0.2
    alpha3: float = -0.1

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "alpha3"):
            if not getattr(self, name) < 0:
                raise ValueError(f"{name} must be strictly negative")
        if self.alpha1 == self.alpha2:
            raise ValueError("alpha1 and alpha2 must differ")

    @classmethod
    def theoretical(cls, epsilon: float, d: int, c1=1.0, c2=1.0, c3=1.0) -> "AlphaConfig":
        """Weights of the form used for the polynomial sample bounds.

        These are vanishingly small for any practical epsilon and are only
        useful for completeness.
        """
        return cls(-c1 * epsilon**82 / d, -c2 * epsilon**42 / d, -c3 * epsilon**2)


@dataclass(frozen=True, eq=False)
class Whitener:
    matrix: np.ndarray
    mean: np.ndarray

    def apply(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) @ self.matrix

    def direction_to_input(self, v) -> np.ndarray:
        """Map a whitened-space normal to a unit normal in input space."""
        w = self.matrix @ np.asarray(v, dtype=float)
        return w / np.linalg.norm(w)

    def normal_to_whitened(self, n) -> np.ndarray:
        """Map an input-space normal to a unit normal in whitened space."""
        w = np.linalg.solve(self.matrix, np.asarray(n, dtype=float))
        return w / np.linalg.norm(w)


@dataclass(frozen=True, eq=False)
class CandidateSet:
    mu_alpha1: np.ndarray
    mu_alpha2: np.ndarray
    cov_top: EigenPair
    whitener: Whitener | None
    cov_second: float | None = None

    KINDS = ("mean1", "mean2", "cov")

    @property
    def mean_flags(self) -> tuple[bool, bool]:
        """True where a re-weighted mean is (numerically) zero."""
        return tuple(bool(np.linalg.norm(m) <= ZERO_NORM_TOL) for m in (self.mu_alpha1, self.mu_alpha2))

    def directions(self) -> list[np.ndarray | None]:
        """Unit directions in candidate order; ``None`` for flagged means."""
        out = []
        for m, flagged in zip((self.mu_alpha1, self.mu_alpha2), self.mean_flags):
            out.append(None if flagged else m / np.linalg.norm(m))
        out.append(self.cov_top.vector)
        return out


def whiten(X):
    """Make the sample isotropic: ``y = Sigma^{-1/2} (x - mean)``."""
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    if n < d + 1:
        raise ValueError(f"need at least d + 1 = {d + 1} rows to whiten, got {n}")
    mean, cov = mean_cov(X)
    W = inv_sqrt(cov)
    w = Whitener(W, mean)
    return w.apply(X), w


def _weights(Y, alpha: float) -> np.ndarray:
    if alpha > 0:
        raise ValueError("alpha must be <= 0; positive weights can overflow")
    return np.exp(alpha * np.einsum("ij,ij->i", Y, Y))


def reweighted_mean(Y, alpha: float) -> np.ndarray:
    """``(1/N) sum_j exp(alpha |y_j|^2) y_j``."""
    Y = np.asarray(Y, dtype=float)
    return _weights(Y, alpha) @ Y / Y.shape[0]


def reweighted_uncentered_cov(Y, alpha: float) -> np.ndarray:
    """``(1/N) sum_j exp(alpha |y_j|^2) y_j y_j^T``."""
    Y = np.asarray(Y, dtype=float)
    w = _weights(Y, alpha)
    return symmetrize((Y * w[:, None]).T @ Y / Y.shape[0])


def candidates(X, cfg: AlphaConfig = AlphaConfig(), *, whitened: bool = False) -> CandidateSet:
    """The three candidate normals of the contrastive-moment method.

    With ``whitened=True`` the input is taken to be isotropic already and
    no whitener is stored.
    """
    if whitened:
        Y, w = np.asarray(X, dtype=float), None
    else:
        Y, w = whiten(X)
    mu1 = reweighted_mean(Y, cfg.alpha1)
    mu2 = reweighted_mean(Y, cfg.alpha2)
    pairs = sym_eigen(reweighted_uncentered_cov(Y, cfg.alpha3))
    second = pairs[1].value if len(pairs) > 1 else None
    return CandidateSet(mu1, mu2, pairs[0], w, second)


def isotropic_candidates(X):
    """Plain mean and top eigenpair of the uncentered second-moment matrix."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 2:
        raise ValueError("need at least 2 rows")
    mean = X.mean(axis=0)
    second = symmetrize(X.T @ X / X.shape[0])
    return mean, top_eigenpair(second)
