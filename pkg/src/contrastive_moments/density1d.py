"""One-dimensional symmetric isotropic logconcave laws and their band truncations.

Three families are supported, each scaled to zero mean and unit variance:

* ``gaussian``: standard normal.
* ``uniform``: uniform on ``[-sqrt(3), sqrt(3)]``.
* ``laplace``: symmetric Laplace with scale ``1/sqrt(2)``. This is the
  symmetric stand-in for the "exponential" family used in experiments.

Removing a band ``[a, b]`` from one of these laws gives the truncated law
whose mean and variance (``mu1``, ``sigma1_sq``) are stored on
:class:`BandSpec`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import integrate, stats

__all__ = [
    "Family",
    "DensityModel",
    "BandSpec",
    "DegenerateBandError",
    "InadmissibleBandError",
    "MAX_MOMENT_ORDER",
    "pdf",
    "cdf",
    "quantile",
    "truncated_moment",
    "band_stats",
    "epsilon_check",
    "sample_truncated",
    "integrate_density",
]

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
MAX_MOMENT_ORDER = 8

# Quadrature controls shared by every integral in the package.
QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-13
QUAD_LIMIT = 400


class DegenerateBandError(ValueError):
    """The band removes (numerically) all of the mass."""


class InadmissibleBandError(ValueError):
    """A band fails the epsilon-margin admissibility check."""


class Family(str, Enum):
    GAUSSIAN = "gaussian"
    UNIFORM = "uniform"
    LAPLACE = "laplace"


@dataclass(frozen=True)
class DensityModel:
    """A symmetric, unit-variance logconcave density on the real line."""

    family: Family

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))

    @classmethod
    def gaussian(cls) -> "DensityModel":
        return cls(Family.GAUSSIAN)

    @classmethod
    def uniform(cls) -> "DensityModel":
        return cls(Family.UNIFORM)

    @classmethod
    def laplace(cls) -> "DensityModel":
        return cls(Family.LAPLACE)

    @property
    def dist(self):
        """The frozen ``scipy.stats`` distribution with the same law."""
        return _DISTS[self.family]

    @property
    def window(self) -> tuple[float, float]:
        """Finite integration window holding all but ~1e-30 of the mass,
        even after weighting by ``x**8``."""
        if self.family is Family.UNIFORM:
            return (-SQRT3, SQRT3)
        if self.family is Family.GAUSSIAN:
            return (-14.0, 14.0)
        return (-60.0, 60.0)

    # Convenience methods so a model can be used wherever a law with
    # ``truncated_moment`` is expected.
    def pdf(self, x):
        return pdf(self, x)

    def cdf(self, x):
        return cdf(self, x)

    def quantile(self, p):
        return quantile(self, p)

    def truncated_moment(self, k: int, t: float) -> float:
        return truncated_moment(self, k, t)


_DISTS = {
    Family.GAUSSIAN: stats.norm(),
    Family.UNIFORM: stats.uniform(loc=-SQRT3, scale=2 * SQRT3),
    Family.LAPLACE: stats.laplace(scale=1 / SQRT2),
}


def pdf(model: DensityModel, x):
    x = np.asarray(x, dtype=float)
    fam = model.family
    if fam is Family.GAUSSIAN:
        out = np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    elif fam is Family.UNIFORM:
        out = np.where(np.abs(x) <= SQRT3, 1.0 / (2 * SQRT3), 0.0)
    else:
        out = np.exp(-SQRT2 * np.abs(x)) / SQRT2
    return out[()] if out.ndim == 0 else out


def cdf(model: DensityModel, x):
    out = model.dist.cdf(x)
    return out[()] if np.ndim(out) == 0 else out


def sf(model: DensityModel, x):
    out = model.dist.sf(x)
    return out[()] if np.ndim(out) == 0 else out


def quantile(model: DensityModel, p):
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr > 0) & (p_arr < 1))):
        raise ValueError(f"quantile requires p in (0, 1), got {p!r}")
    out = model.dist.ppf(p_arr)
    return out[()] if out.ndim == 0 else out


def integrate_density(model: DensityModel, g, lo: float, hi: float) -> float:
    """Integrate ``g(x) * q(x)`` over ``[lo, hi]`` clipped to the model window.

    Infinite limits are allowed. The kink of the Laplace density at zero
    is passed to the integrator as a breakpoint.
    """
    wlo, whi = model.window
    lo, hi = max(lo, wlo), min(hi, whi)
    if hi <= lo:
        return 0.0

    def f(x):
        return g(x) * pdf(model, x)

    pieces = [lo, hi]
    if lo < 0.0 < hi:
        pieces = [lo, 0.0, hi]
    total = 0.0
    for left, right in zip(pieces[:-1], pieces[1:]):
        val, _ = integrate.quad(
            f, left, right, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT
        )
        total += val
    return total


def _gaussian_tail_moments(k: int, t: float) -> list[float]:
    phi = math.exp(-0.5 * t * t) / math.sqrt(2 * math.pi) if math.isfinite(t) else 0.0
    m = [float(stats.norm.sf(t)), phi]
    for j in range(2, k + 1):
        lead = t ** (j - 1) * phi if phi > 0.0 else 0.0
        m.append(lead + (j - 1) * m[j - 2])
    return m[: k + 1]


def _laplace_pos_tail(k: int, t: float) -> float:
    # t >= 0; density restricted to x >= 0 is 0.5 * rate * exp(-rate x)
    rate = SQRT2
    s = sum(math.factorial(k) / math.factorial(j) * t**j / rate ** (k - j) for j in range(k + 1))
    return 0.5 * math.exp(-rate * t) * s


def truncated_moment(model: DensityModel, k: int, t: float) -> float:
    """Upper-tail moment ``M_k(t) = int_t^inf x^k q(x) dx`` in closed form."""
    if not 0 <= k <= MAX_MOMENT_ORDER:
        raise ValueError(f"moment order must be in [0, {MAX_MOMENT_ORDER}], got {k}")
    t = float(t)
    fam = model.family
    if fam is Family.GAUSSIAN:
        return _gaussian_tail_moments(k, t)[k]
    if fam is Family.UNIFORM:
        lo = min(max(t, -SQRT3), SQRT3)
        return (SQRT3 ** (k + 1) - lo ** (k + 1)) / ((k + 1) * 2 * SQRT3)
    if t >= 0:
        return _laplace_pos_tail(k, t)
    # int_t^0 x^k q = (-1)^k (M_k(0) - M_k(-t)) by symmetry of q
    full = _laplace_pos_tail(k, 0.0)
    return (-1) ** k * (full - _laplace_pos_tail(k, -t)) + full


@dataclass(frozen=True)
class BandSpec:
    """A removed interval ``[a, b]`` and the statistics of what remains.

    ``mu1`` and ``sigma1_sq`` are the mean and variance of the model
    restricted to the complement of ``[a, b]``.
    """

    a: float
    b: float
    mass: float
    left_tail: float
    right_tail: float
    mu1: float
    sigma1_sq: float
    model: DensityModel = field(repr=False, compare=False, default=None)

    @property
    def sigma1(self) -> float:
        return math.sqrt(self.sigma1_sq)

    @property
    def kept(self) -> float:
        return self.left_tail + self.right_tail

    @property
    def a_std(self) -> float:
        """Left band edge after standardizing the truncated law."""
        return (self.a - self.mu1) / self.sigma1

    @property
    def b_std(self) -> float:
        return (self.b - self.mu1) / self.sigma1

    def min_mass(self) -> float:
        return min(self.left_tail, self.mass, self.right_tail)


def band_stats(model: DensityModel, a: float, b: float) -> BandSpec:
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"band requires a < b, got a={a}, b={b}")
    left = float(cdf(model, a))
    right = float(sf(model, b))
    # Difference the CDF on the side where it is small to avoid cancellation.
    if b <= 0:
        mass = float(cdf(model, b)) - left
    elif a >= 0:
        mass = float(sf(model, a)) - right
    else:
        mass = 1.0 - left - right
    kept = left + right
    if mass >= 1.0 - 1e-12 or kept <= 1e-12:
        raise DegenerateBandError(f"band [{a}, {b}] swallows the whole distribution")
    inner_first = truncated_moment(model, 1, a) - truncated_moment(model, 1, b)
    inner_second = truncated_moment(model, 2, a) - truncated_moment(model, 2, b)
    mu1 = 0.0 if a == -b else -inner_first / kept
    sigma1_sq = (1.0 - inner_second) / kept - mu1 * mu1
    return BandSpec(a, b, mass, left, right, mu1, sigma1_sq, model)


def epsilon_check(band: BandSpec, epsilon: float) -> bool:
    """Whether each tail and the band itself carry at least ``epsilon`` mass."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    return band.min_mass() >= epsilon


def truncated_cdf(model: DensityModel, band: BandSpec, x):
    """CDF of the model restricted to the complement of the band."""
    x = np.asarray(x, dtype=float)
    f = np.where(
        x < band.a,
        cdf(model, x),
        np.where(x < band.b, band.left_tail, cdf(model, x) - band.mass),
    )
    return f / band.kept


def sample_truncated(model: DensityModel, band: BandSpec, rng: np.random.Generator, size=None):
    """Draw from the model restricted to the complement of ``[a, b]``.

    Inverse-CDF on the two tail pieces: pick a tail with probability
    proportional to its mass, then invert the CDF inside that tail.
    """
    n = 1 if size is None else size
    # one (n, 2) draw keeps row i's randomness independent of n
    r = rng.random((n, 2))
    choose, u = r[:, 0], r[:, 1]
    left_share = band.left_tail / band.kept
    go_left = choose < left_share
    out = np.empty(n, dtype=float)
    dist = model.dist
    # 1 - u keeps the argument in (0, 1], avoiding the infinite endpoint.
    if np.any(go_left):
        p = (1.0 - u[go_left]) * band.left_tail
        out[go_left] = np.minimum(dist.ppf(p), band.a)
    if np.any(~go_left):
        p = (1.0 - u[~go_left]) * band.right_tail
        out[~go_left] = np.maximum(dist.isf(p), band.b)
    if size is None:
        return float(out[0])
    return out
