"""Recompute the frozen reference values used in the tests with mpmath.

This route shares no code with the package: densities are written out
by hand and integrated at 30 significant digits. Run it and paste the
printed numbers into tests/test_oracle.py when a reference changes.
"""

import mpmath as mp

mp.mp.dps = 30
SQ2, SQ3 = mp.sqrt(2), mp.sqrt(3)

PDF = {
    "gaussian": lambda x: mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi),
    "laplace": lambda x: mp.exp(-SQ2 * abs(x)) / SQ2,
    "uniform": lambda x: 1 / (2 * SQ3) if abs(x) <= SQ3 else mp.mpf(0),
}
SUPPORT = {"gaussian": (-mp.inf, mp.inf), "laplace": (-mp.inf, mp.inf), "uniform": (-SQ3, SQ3)}


def outside(fam, g, a, b):
    lo, hi = SUPPORT[fam]
    q = PDF[fam]
    left = mp.quad(lambda x: g(x) * q(x), [lo, min(a, 0), a] if a > 0 and lo == -mp.inf else [lo, a])
    right = mp.quad(lambda x: g(x) * q(x), [b, max(b, 0), hi] if b < 0 else [b, hi])
    return left + right


def band(fam, a, b):
    kept = outside(fam, lambda x: 1, a, b)
    mu = outside(fam, lambda x: x, a, b) / kept
    var = outside(fam, lambda x: x * x, a, b) / kept - mu * mu
    return kept, mu, var


def hat(fam, a, b, alpha, p):
    kept, mu, var = band(fam, a, b)
    sig = mp.sqrt(var)
    return outside(fam, lambda s: mp.exp(alpha * ((s - mu) / sig) ** 2) * ((s - mu) / sig) ** p, a, b) / kept


def full(fam, alpha, p):
    lo, hi = SUPPORT[fam]
    return mp.quad(lambda x: mp.exp(alpha * x * x) * x**p * PDF[fam](x), [lo, 0, hi])


def S(fam, a, b, alpha):
    return hat(fam, a, b, alpha, 2) * full(fam, alpha, 0) - full(fam, alpha, 2) * hat(fam, a, b, alpha, 0)


def half_gauss_mr(t):
    m = [mp.quad(lambda x: x**k * PDF["gaussian"](x), [t, mp.inf]) for k in (0, 2, 4)]
    return m[0] * m[2] / m[1] ** 2 - 1


if __name__ == "__main__":
    out = {
        "gaussian(-1,1) sigma1_sq": band("gaussian", -1, 1)[2],
        "gaussian(0.5,1.5) mu1": band("gaussian", mp.mpf("0.5"), mp.mpf("1.5"))[1],
        "laplace(-2,0.5) sigma1_sq": band("laplace", -2, mp.mpf("0.5"))[2],
        "F gaussian(-2,0.5) alpha=-0.1": hat("gaussian", -2, mp.mpf("0.5"), mp.mpf("-0.1"), 1),
        "F laplace(0.3,1.3) alpha=-0.3": hat("laplace", mp.mpf("0.3"), mp.mpf("1.3"), mp.mpf("-0.3"), 1),
        "S gaussian(-0.5,0.5) alpha=-0.1": S("gaussian", mp.mpf("-0.5"), mp.mpf("0.5"), mp.mpf("-0.1")),
        "S uniform(-0.5,0.5) alpha=-0.1": S("uniform", mp.mpf("-0.5"), mp.mpf("0.5"), mp.mpf("-0.1")),
        "S laplace(-0.5,0.5) alpha=-0.1": S("laplace", mp.mpf("-0.5"), mp.mpf("0.5"), mp.mpf("-0.1")),
        "mr half-gaussian t=1": half_gauss_mr(1),
        "mr half-gaussian t=2.5": half_gauss_mr(mp.mpf("2.5")),
    }
    for k, v in out.items():
        print(f"{k}: {mp.nstr(v, 17)}")
