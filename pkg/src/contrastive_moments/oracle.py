"""Quadrature checks of the one-dimensional facts behind the method.

Everything here works on exact densities rather than samples:

* ``F(alpha)``: re-weighted mean of the standardized truncated law.
* ``S(alpha)``: the spectral gap of the re-weighted covariance, up to a
  positive factor.
* ``mr(t)``: the moment ratio ``Var(X^2) / (E X^2)^2`` of a half-line law
  restricted to ``[t, inf)``.
* ``N_k(t)`` and ``H(t)`` for exponential half-line laws in closed form.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, optimize

from .density1d import (
    QUAD_LIMIT,
    BandSpec,
    DensityModel,
    band_stats,
    integrate_density,
)

__all__ = [
    "LemmaReport",
    "ExponentialLaw",
    "F",
    "F_derivative",
    "count_sign_changes_F",
    "S",
    "weighted_moment",
    "moment_ratio",
    "H",
    "exp_Nk",
    "exp_H_combo",
    "exp_H_closed",
    "exp_H_positivity",
    "mr_monotonicity",
    "quad_exponential_moment",
    "SIGN_ZERO_TOL",
    "symmetric_band_for_mass",
    "band_for_mass",
    "count_sign_changes",
]

SIGN_ZERO_TOL = 1e-9


@dataclass
class LemmaReport:
    lemma_id: str
    grid: list
    values: list
    verdict: bool
    worst_violation: float
    tolerance: float = 0.0
    note: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "LemmaReport":
        return cls(**json.loads(text))


@dataclass(frozen=True)
class ExponentialLaw:
    """Half-line density ``beta * exp(-gamma x)`` on ``[0, inf)``."""

    beta: float = 1.0
    gamma: float = 1.0

    def truncated_moment(self, k: int, t: float) -> float:
        return exp_Nk(self.beta, self.gamma, k, t)


# ---------------------------------------------------------------------------
# re-weighted moments of the truncated, standardized law


def _truncated_integral(model: DensityModel, band: BandSpec, g) -> float:
    """``int g(x) q(x) dx`` over the complement of the band, in raw units."""
    return integrate_density(model, g, -math.inf, band.a) + integrate_density(model, g, band.b, math.inf)


def weighted_moment(model: DensityModel, band: BandSpec | None, alpha: float, power: int) -> float:
    """``E[exp(alpha x^2) x^power]`` under the standardized truncated law.

    With ``band=None`` the expectation is under the untruncated model.
    """
    if alpha > 0:
        raise ValueError("alpha must be <= 0")
    if band is None:
        return integrate_density(model, lambda x: np.exp(alpha * x * x) * x**power, -math.inf, math.inf)
    mu, sig = band.mu1, band.sigma1

    def g(s):
        x = (s - mu) / sig
        return np.exp(alpha * x * x) * x**power

    return _truncated_integral(model, band, g) / band.kept


def F(model: DensityModel, band: BandSpec, alpha: float) -> float:
    """Re-weighted mean ``E exp(alpha x^2) x`` of the standardized truncated law."""
    return weighted_moment(model, band, alpha, 1)


def F_derivative(model: DensityModel, band: BandSpec, alpha: float) -> float:
    """``dF/dalpha = E exp(alpha x^2) x^3`` by direct quadrature."""
    return weighted_moment(model, band, alpha, 3)


def count_sign_changes(values, zero_tol: float = SIGN_ZERO_TOL) -> int:
    signs = [math.copysign(1.0, v) for v in values if abs(v) > zero_tol]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_sign_changes_F(model: DensityModel, band: BandSpec, alpha_grid) -> int:
    return count_sign_changes([F(model, band, a) for a in alpha_grid])


def S(model: DensityModel, band: BandSpec | None, alpha: float) -> float:
    """``E_hat[w x^2] E_q[w] - E_q[w x^2] E_hat[w]`` with ``w = exp(alpha x^2)``.

    ``band=None`` means no truncation, where the value is identically 0.
    """
    if band is None:
        return 0.0
    hat2 = weighted_moment(model, band, alpha, 2)
    hat0 = weighted_moment(model, band, alpha, 0)
    q2 = weighted_moment(model, None, alpha, 2)
    q0 = weighted_moment(model, None, alpha, 0)
    return hat2 * q0 - q2 * hat0


# ---------------------------------------------------------------------------
# moment ratio and its exponential comparison


def moment_ratio(law, t: float) -> float:
    """``M_0(t) M_4(t) / M_2(t)^2 - 1`` for the law's upper tail from ``t >= 0``.

    ``law`` is anything with ``truncated_moment(k, t)``; a symmetric
    :class:`DensityModel` stands for its restriction to ``[0, inf)``.
    """
    if t < 0:
        raise ValueError("moment ratio is defined for t >= 0")
    m0 = law.truncated_moment(0, t)
    m2 = law.truncated_moment(2, t)
    m4 = law.truncated_moment(4, t)
    return m0 * m4 / (m2 * m2) - 1.0


def H(law, t: float) -> float:
    """``t^4 M0 M2 + M2 M4 - 2 t^2 M0 M4``; positive iff mr is decreasing at t."""
    m0 = law.truncated_moment(0, t)
    m2 = law.truncated_moment(2, t)
    m4 = law.truncated_moment(4, t)
    return t**4 * m0 * m2 + m2 * m4 - 2 * t**2 * m0 * m4


def exp_Nk(beta: float, gamma: float, k: int, t: float) -> float:
    """Closed form of ``int_t^inf x^k beta exp(-gamma x) dx`` for ``k <= 4``."""
    if beta <= 0 or gamma <= 0:
        raise ValueError("beta and gamma must be positive")
    if t < 0:
        raise ValueError("t must be nonnegative")
    g = gamma
    polys = {
        0: 1.0,
        1: t + 1 / g,
        2: t**2 + 2 * t / g + 2 / g**2,
        3: t**3 + 3 * t**2 / g + 6 * t / g**2 + 6 / g**3,
        4: t**4 + 4 * t**3 / g + 12 * t**2 / g**2 + 24 * t / g**3 + 24 / g**4,
    }
    if k not in polys:
        raise ValueError("closed forms are available for k = 0..4")
    return polys[k] * beta / g * math.exp(-g * t)


def quad_exponential_moment(beta: float, gamma: float, k: int, t: float) -> float:
    """Adaptive quadrature of the same integral, for cross-checking."""
    val, _ = integrate.quad(
        lambda x: x**k * beta * math.exp(-gamma * x),
        t,
        math.inf,
        epsabs=1e-13,
        epsrel=1e-12,
        limit=QUAD_LIMIT,
    )
    return val


def exp_H_combo(beta: float, gamma: float, t: float) -> float:
    n0, n2, n4 = (exp_Nk(beta, gamma, k, t) for k in (0, 2, 4))
    return t**4 * n0 * n2 + n2 * n4 - 2 * t**2 * n0 * n4


def exp_H_closed(beta: float, gamma: float, t: float) -> float:
    g = gamma
    return (
        8 * beta**2 / g**2 * math.exp(-2 * g * t)
        * (t**3 / g**3 + 6 * t**2 / g**4 + 12 * t / g**5 + 6 / g**6)
    )


def exp_H_positivity(beta: float, gamma: float, t_grid, tol: float = 1e-9) -> LemmaReport:
    grid = [float(t) for t in t_grid]
    combo = [exp_H_combo(beta, gamma, t) for t in grid]
    closed = [exp_H_closed(beta, gamma, t) for t in grid]
    identity_err = max(
        (abs(c - h) / max(1.0, abs(h)) for c, h in zip(combo, closed)), default=0.0
    )
    nonpositive = max((-c for c in combo), default=-math.inf)
    positive = all(c > 0 for c in combo)
    worst = max(identity_err, nonpositive if not positive else 0.0)
    return LemmaReport(
        f"exp-H-positivity(beta={beta:g},gamma={gamma:g})",
        grid,
        combo,
        positive and identity_err <= tol,
        worst,
        tol,
        "H(t) > 0 on the grid and the three-term combination matches its closed form",
    )


def mr_monotonicity(law, t_grid, tol: float = 1e-8, name: str | None = None) -> LemmaReport:
    grid = [float(t) for t in t_grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("t_grid must be sorted")
    values = [moment_ratio(law, t) for t in grid]
    rises = [b - a for a, b in zip(values, values[1:])]
    worst = max([0.0] + rises)
    if name is None:
        name = getattr(getattr(law, "family", None), "value", None) or type(law).__name__
    return LemmaReport(
        f"mr-monotonicity({name})",
        grid,
        values,
        worst <= tol,
        worst,
        tol,
        "moment ratio of the upper tail decreases in t",
    )


def symmetric_band_for_mass(model: DensityModel, mass: float) -> BandSpec:
    """The band ``[-b, b]`` carrying exactly ``mass``."""
    b = float(model.quantile(0.5 + mass / 2.0))
    return band_stats(model, -b, b)


def band_for_mass(model: DensityModel, mass: float, center: float = 0.0) -> BandSpec:
    """The band ``[center - h, center + h]`` carrying exactly ``mass``."""
    if center == 0.0:
        return symmetric_band_for_mass(model, mass)
    lo, hi = model.window
    total = float(model.cdf(hi) - model.cdf(lo))

    def excess(h):
        return float(model.cdf(center + h) - model.cdf(center - h)) - mass

    h_max = max(abs(hi - center), abs(center - lo))
    if excess(h_max) < 0:
        raise ValueError(f"no band centred at {center} carries mass {mass} (total {total:.3g})")
    h = optimize.brentq(excess, 0.0, h_max, xtol=1e-14, rtol=1e-14)
    return band_stats(model, center - h, center + h)
