"""Max-margin scans along candidate directions and the angle metric."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimator import AlphaConfig, CandidateSet, Whitener, candidates, isotropic_candidates

__all__ = [
    "MarginReport",
    "NoCandidateError",
    "RecoveryResult",
    "max_margin",
    "select",
    "sin_theta",
    "recover",
    "recover_isotropic",
    "DEFAULT_MIN_SIDE_FRACTION",
]

DEFAULT_MIN_SIDE_FRACTION = 0.05


class NoCandidateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MarginReport:
    direction: np.ndarray
    gap_lo: float
    gap_hi: float
    left_count: int
    right_count: int

    @property
    def width(self) -> float:
        return self.gap_hi - self.gap_lo


def max_margin(Y, direction, min_side_fraction: float = DEFAULT_MIN_SIDE_FRACTION) -> MarginReport:
    """Widest empty interval between consecutive sorted projections.

    Only splits leaving at least ``max(1, ceil(min_side_fraction * N))``
    points on each side are considered. With ``min_side_fraction=0`` this
    is the raw maximum gap.
    """
    Y = np.asarray(Y, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if abs(np.linalg.norm(direction) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    if not 0.0 <= min_side_fraction < 0.5:
        raise ValueError("min_side_fraction must lie in [0, 0.5)")
    n = Y.shape[0]
    if n < 2:
        raise ValueError("need at least 2 points to scan for a margin")
    k = max(1, math.ceil(min_side_fraction * n))
    if n - k < k:
        raise ValueError(f"cannot keep {k} points on each side of {n}")
    proj = np.sort(Y @ direction)
    # split i separates proj[:i] from proj[i:]
    gaps = proj[k : n - k + 1] - proj[k - 1 : n - k]
    j = int(np.argmax(gaps))
    i = k + j
    return MarginReport(direction, float(proj[i - 1]), float(proj[i]), i, n - i)


def select(Y, cands, min_side_fraction: float = DEFAULT_MIN_SIDE_FRACTION):
    """Pick the candidate with the widest margin.

    ``cands`` is a :class:`CandidateSet` or a sequence of directions in
    which ``None`` marks a flagged candidate. Ties go to the earliest
    candidate. Returns ``(index, direction, reports)``; flagged
    candidates get a ``None`` report.
    """
    dirs = cands.directions() if isinstance(cands, CandidateSet) else list(cands)
    reports = [None if v is None else max_margin(Y, v, min_side_fraction) for v in dirs]
    best = None
    for i, rep in enumerate(reports):
        if rep is not None and (best is None or rep.width > reports[best].width):
            best = i
    if best is None:
        raise NoCandidateError("every candidate direction is flagged")
    return best, dirs[best], reports


def sin_theta(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("sin_theta needs nonzero vectors")
    c = float(u @ v) / (nu * nv)
    return math.sqrt(max(0.0, 1.0 - c * c))


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    candidates: CandidateSet | None
    directions: list
    reports: list
    selected: int
    chosen: np.ndarray
    whitener: Whitener | None
    kinds: tuple = CandidateSet.KINDS

    @property
    def selected_kind(self) -> str:
        return self.kinds[self.selected]

    def chosen_in_input_coords(self) -> np.ndarray:
        if self.whitener is None:
            return self.chosen
        return self.whitener.direction_to_input(self.chosen)

    def sin_thetas(self, normal) -> list[float]:
        """Angle sines between each candidate and ``normal`` (same coordinates).

        Flagged candidates score 1.0: they carry no direction at all.
        """
        return [1.0 if v is None else sin_theta(normal, v) for v in self.directions]


def recover(X, cfg: AlphaConfig = AlphaConfig(), min_side_fraction: float = DEFAULT_MIN_SIDE_FRACTION):
    """Whiten, build the three contrastive candidates, keep the widest margin.

    Directions in the result live in whitened coordinates.
    """
    cs = candidates(X, cfg)
    Y = cs.whitener.apply(X)
    idx, chosen, reports = select(Y, cs, min_side_fraction)
    return RecoveryResult(cs, cs.directions(), reports, idx, chosen, cs.whitener)


def recover_isotropic(X, min_side_fraction: float = DEFAULT_MIN_SIDE_FRACTION):
    """No-whitening variant: sample mean vs. top uncentered eigenvector."""
    X = np.asarray(X, dtype=float)
    mean, top = isotropic_candidates(X)
    norm = np.linalg.norm(mean)
    dirs = [None if norm == 0 else mean / norm, top.vector]
    idx, chosen, reports = select(X, dirs, min_side_fraction)
    return RecoveryResult(None, dirs, reports, idx, chosen, None, kinds=("mean", "cov"))
