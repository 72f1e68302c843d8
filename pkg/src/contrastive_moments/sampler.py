"""Problem instances and data generation for product distributions with a margin.

A :class:`MarginInstance` fixes the one-dimensional law, the removed band,
the dimension and a hidden full-rank affine map. :func:`generate` draws
rows ``x = A @ (R @ z) + shift`` where ``z_1`` follows the truncated law
and ``z_2, ..., z_d`` follow the untruncated one.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .density1d import (
    BandSpec,
    DensityModel,
    Family,
    InadmissibleBandError,
    band_stats,
    sample_truncated,
)

__all__ = [
    "AffineMode",
    "MarginInstance",
    "Dataset",
    "make_instance",
    "generate",
    "latent_first_coordinate",
    "save_csv",
    "load_csv",
    "save_binary",
    "load_binary",
    "BLOCK_ROWS",
]

# Rows are generated in fixed-size blocks, each with its own RNG substream
# keyed by (seed, block index, stream).
BLOCK_ROWS = 1 << 15

MAGIC = b"CMDS"
FORMAT_VERSION = 1


class AffineMode(str, Enum):
    IDENTITY = "identity"
    ROTATION = "rotation"
    RANDOM = "random"


@dataclass(frozen=True, eq=False)
class MarginInstance:
    model: DensityModel
    band: BandSpec
    d: int
    rotation: np.ndarray
    A: np.ndarray
    shift: np.ndarray
    epsilon: float
    affine_mode: AffineMode = AffineMode.IDENTITY
    # When False the truncated coordinate keeps its raw (non-isotropic)
    # mean and variance; used for the no-whitening warm-up algorithm.
    standardize: bool = True

    @property
    def u(self) -> np.ndarray:
        """Hidden unit normal before the affine map ``A`` is applied."""
        return self.rotation[:, 0].copy()

    def normal_in_input_coords(self) -> np.ndarray:
        """Unit normal of the margin in the coordinates of generated data."""
        n = np.linalg.solve(self.A.T, self.u)
        return n / np.linalg.norm(n)


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    seed: int | None = None
    instance: MarginInstance | None = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]


def _haar_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((d, d)))
    return Q * np.sign(np.diag(R))


def _capped_affine(d: int, kappa_max: float, rng: np.random.Generator) -> np.ndarray:
    """Gaussian matrix whose singular values are squeezed into ``[1, kappa_max]``.

    The singular vectors of the Gaussian draw are kept. The log-spectrum is
    rescaled only when the raw condition number exceeds ``kappa_max``.
    """
    G = rng.standard_normal((d, d))
    U, s, Vt = np.linalg.svd(G)
    kappa = s[0] / s[-1]
    if kappa > kappa_max:
        logs = np.log(s / s[-1]) * (math.log(kappa_max) / math.log(kappa))
        s = s[-1] * np.exp(logs)
    return (U * s) @ Vt


def make_instance(
    model: DensityModel,
    a: float,
    b: float,
    d: int,
    epsilon: float,
    affine_mode: AffineMode | str = AffineMode.IDENTITY,
    rng: np.random.Generator | None = None,
    *,
    kappa_max: float = 10.0,
    shift_scale: float = 1.0,
    standardize: bool = True,
) -> MarginInstance:
    if not isinstance(model, DensityModel):
        model = DensityModel(Family(model))
    affine_mode = AffineMode(affine_mode)
    if d < 2:
        raise ValueError("dimension must be at least 2")
    band = band_stats(model, a, b)
    violated = [
        name
        for name, m in (("left tail", band.left_tail), ("band mass", band.mass), ("right tail", band.right_tail))
        if m < epsilon
    ]
    if violated:
        raise InadmissibleBandError(
            f"band [{a}, {b}] fails the epsilon={epsilon} check: "
            + ", ".join(f"{n} too small" for n in violated)
        )
    if rng is None:
        rng = np.random.default_rng()

    if affine_mode is AffineMode.IDENTITY:
        rotation = np.eye(d)
        A = np.eye(d)
        shift = np.zeros(d)
    else:
        rotation = _haar_orthogonal(d, rng)
        if affine_mode is AffineMode.ROTATION:
            A = np.eye(d)
            shift = np.zeros(d)
        else:
            A = _capped_affine(d, kappa_max, rng)
            shift = shift_scale * rng.standard_normal(d)
    return MarginInstance(model, band, d, rotation, A, shift, epsilon, affine_mode, standardize)


def _draw_base(model: DensityModel, rng: np.random.Generator, size) -> np.ndarray:
    fam = model.family
    if fam is Family.GAUSSIAN:
        return rng.standard_normal(size)
    if fam is Family.UNIFORM:
        return rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size)
    return rng.laplace(0.0, 1.0 / math.sqrt(2.0), size)


def _latent_block(instance: MarginInstance, n: int, seed: int, block: int) -> np.ndarray:
    # separate substreams for the truncated coordinate and the rest, so the
    # first rows of a dataset do not depend on N
    rng_first = np.random.default_rng(np.random.SeedSequence([seed, block, 0]))
    rng_rest = np.random.default_rng(np.random.SeedSequence([seed, block, 1]))
    z = np.empty((n, instance.d))
    first = sample_truncated(instance.model, instance.band, rng_first, size=n)
    if instance.standardize:
        first = (first - instance.band.mu1) / instance.band.sigma1
    z[:, 0] = first
    z[:, 1:] = _draw_base(instance.model, rng_rest, (n, instance.d - 1))
    return z


def generate(instance: MarginInstance, N: int, seed: int) -> Dataset:
    """Draw ``N`` rows from the instance; deterministic in ``seed``."""
    if N < 1:
        raise ValueError("N must be positive")
    seed = int(seed)
    blocks = []
    for k, start in enumerate(range(0, N, BLOCK_ROWS)):
        blocks.append(_latent_block(instance, min(BLOCK_ROWS, N - start), seed, k))
    Z = np.vstack(blocks)
    M = instance.A @ instance.rotation
    X = Z @ M.T + instance.shift
    return Dataset(X, seed, instance)


def latent_first_coordinate(instance: MarginInstance, X) -> np.ndarray:
    """Undo the affine map and return the truncated coordinate in raw units."""
    X = np.asarray(X, dtype=float)
    Z = np.linalg.solve(instance.A, (X - instance.shift).T).T @ instance.rotation
    z1 = Z[:, 0]
    if instance.standardize:
        z1 = z1 * instance.band.sigma1 + instance.band.mu1
    return z1


def save_csv(X, path) -> None:
    X = np.asarray(X, dtype=float)
    header = ",".join(f"x{i}" for i in range(X.shape[1]))
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for row in X:
            fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def load_csv(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        X = np.loadtxt(fh, delimiter=",", ndmin=2)
    if X.size == 0:
        X = X.reshape(0, len(header))
    if X.shape[1] != len(header):
        raise ValueError("row width does not match header")
    return X


def save_binary(X, path) -> None:
    X = np.ascontiguousarray(X, dtype="<f8")
    n, d = X.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQI", FORMAT_VERSION, n, d))
        fh.write(X.tobytes(order="C"))


def load_binary(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise ValueError("not a CMDS dataset file")
    version, n, d = struct.unpack_from("<IQI", raw, 4)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported CMDS version {version}")
    offset = 4 + struct.calcsize("<IQI")
    expected = offset + 8 * n * d
    if len(raw) != expected:
        raise ValueError(f"truncated CMDS file: expected {expected} bytes, got {len(raw)}")
    return np.frombuffer(raw, dtype="<f8", offset=offset).reshape(n, d).astype(float)
