"""Representative-vector sampling and the baseline spectral program.

Randomness comes from SplitMix64, a published 64-bit generator with a fixed
algorithm, so sample streams are reproducible byte for byte from the seed.
Gaussians are produced with the Marsaglia polar method; both choices keep the
stream portable across platforms and re-implementations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import DensityMatrix, SpectralBasis

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@dataclass(frozen=True)
class SampleConfig:
    """Seeded sampling request; ``seed`` is a 64-bit unsigned integer."""

    seed: int
    count: int = 1

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"sample count must be >= 1, got {self.count}")


def _splitmix64(seed: int, start: int, count: int) -> np.ndarray:
    """Outputs start..start+count-1 of the SplitMix64 stream for ``seed``."""
    index = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + index * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def standard_normals(seed: int, count: int) -> np.ndarray:
    """Deterministic N(0, 1) draws: SplitMix64 uniforms through the polar method.

    Consecutive uniform pairs map to (-1, 1)^2; pairs with squared radius in
    (0, 1) each yield two normals, others are rejected. The output depends on
    the seed alone, not on internal batch sizes.
    """
    out = np.empty(count)
    filled = 0
    cursor = 0
    batch = max(2 * count, 64)
    while filled < count:
        words = _splitmix64(seed, cursor, 2 * batch)
        cursor += 2 * batch
        uniforms = (words >> np.uint64(11)).astype(np.float64) * 2.0**-53
        u = 2.0 * uniforms[0::2] - 1.0
        v = 2.0 * uniforms[1::2] - 1.0
        radius_sq = u * u + v * v
        accept = (radius_sq > 0.0) & (radius_sq < 1.0)
        factor = np.sqrt(-2.0 * np.log(radius_sq[accept]) / radius_sq[accept])
        pair_block = np.empty((accept.sum(), 2))
        pair_block[:, 0] = u[accept] * factor
        pair_block[:, 1] = v[accept] * factor
        normals = pair_block.ravel()
        take = min(normals.size, count - filled)
        out[filled : filled + take] = normals[:take]
        filled += take
    return out


def sample_vector(density: DensityMatrix, cfg: SampleConfig) -> np.ndarray:
    """Draw ``cfg.count`` vectors x = X^1/2 xi with xi entries iid N(0, 1/n).

    Rows of the result are samples; each lies in the range of X and is thus
    orthogonal to D^1/2 1. The second moment of the samples is X / n with n
    the ambient node count (see :func:`empirical_second_moment`).
    """
    n = density.basis.n
    normals = standard_normals(cfg.seed, cfg.count * n).reshape(cfg.count, n)
    xi = normals / np.sqrt(n)
    return xi @ density.sqrt()


def empirical_second_moment(samples: np.ndarray, ambient_n: int) -> np.ndarray:
    """Unbiased estimator of X from samples: (n/m) sum of outer products.

    The rescaling by the ambient dimension undoes the 1/n variance of the
    seed vectors, so the expectation is exactly the density matrix.
    """
    samples = np.asarray(samples, dtype=float)
    m = samples.shape[0]
    return (ambient_n / m) * samples.T @ samples


def spectral_solve(basis: SpectralBasis) -> tuple[float, np.ndarray]:
    """Smallest nontrivial eigenvalue of L and its sign-fixed unit eigenvector.

    The vector is orthogonal to D^1/2 1 and attains x^T L x equal to the
    returned value. Within a degenerate eigenspace only the value and the
    constraints are contractual.
    """
    mask = basis.nontrivial_mask
    values = basis.eigenvalues[mask]
    vectors = basis.eigenvectors[:, mask]
    best = int(np.argmin(values))
    return float(values[best]), vectors[:, best].copy()
