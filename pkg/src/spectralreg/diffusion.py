"""Diffusion operators: heat kernel, PageRank resolvent, lazy walk powers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphaOutOfRangeError,
    BadPreferenceVectorError,
    GammaOutOfRangeError,
    InputError,
    NegativeEigenvalueFractionalPowerError,
    NegativeTimeError,
    SingularResolventError,
    ZeroStartVectorError,
)
from .graphs import Graph, build_walk_matrices
from .spectral import SpectralBasis, apply_spectral_function, decompose


@dataclass(frozen=True)
class DiffusionParams:
    """Validated bag of diffusion parameters; unset fields are skipped.

    ``k`` may be a nonnegative real for matrix powers but must be an integer
    for iterated vector walks.
    """

    t: float | None = None
    gamma: float | None = None
    s: np.ndarray | None = None
    alpha: float | None = None
    k: float | None = None

    def __post_init__(self):
        if self.t is not None and not self.t >= 0.0:
            raise NegativeTimeError(f"heat time must be >= 0, got {self.t}")
        if self.gamma is not None and not (0.0 < self.gamma <= 1.0):
            raise GammaOutOfRangeError(f"teleportation must be in (0, 1], got {self.gamma}")
        if self.alpha is not None and not (0.0 <= self.alpha <= 1.0):
            raise AlphaOutOfRangeError(f"laziness must be in [0, 1], got {self.alpha}")
        if self.k is not None and not self.k >= 0.0:
            raise InputError(f"step count must be >= 0, got {self.k}")
        if self.s is not None:
            _check_preference(np.asarray(self.s, dtype=float))


def _check_preference(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.min(s) < -1e-12:
        raise BadPreferenceVectorError(f"preference entries must be >= 0, got min {np.min(s)}")
    if abs(float(s.sum()) - 1.0) > 1e-10:
        raise BadPreferenceVectorError(f"preference must sum to 1, got {float(s.sum())}")
    return s


def heat_kernel(basis: SpectralBasis, t: float) -> np.ndarray:
    """exp(-t L) restricted to the nontrivial subspace; symmetric PSD."""
    if not t >= 0.0:
        raise NegativeTimeError(f"heat time must be >= 0, got {t}")
    return apply_spectral_function(basis, lambda l: math.exp(-t * l))


def _resolvent_solve(g: Graph, gamma: float, rhs: np.ndarray) -> np.ndarray:
    m = build_walk_matrices(g).M
    system = np.eye(g.n) - (1.0 - gamma) * m
    try:
        return gamma * np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:  # unreachable for gamma > 0, guarded anyway
        raise SingularResolventError(str(exc)) from exc


def pagerank_operator(g: Graph, gamma: float) -> np.ndarray:
    """gamma (I - (1 - gamma) M)^-1 on the full space; columns sum to 1.

    gamma = 1 is admitted as the closed-form limit (the identity).
    """
    if not (0.0 < gamma <= 1.0):
        raise GammaOutOfRangeError(f"teleportation must be in (0, 1], got {gamma}")
    if gamma == 1.0:
        return np.eye(g.n)
    return _resolvent_solve(g, gamma, np.eye(g.n))


def pagerank_vector(g: Graph, gamma: float, s: np.ndarray) -> np.ndarray:
    """Unique solution of pi = gamma s + (1 - gamma) M pi."""
    if not (0.0 < gamma <= 1.0):
        raise GammaOutOfRangeError(f"teleportation must be in (0, 1], got {gamma}")
    s = _check_preference(s)
    if gamma == 1.0:
        return s.copy()
    return _resolvent_solve(g, gamma, s)


def lazy_pagerank_vector(g: Graph, gamma: float, s: np.ndarray) -> np.ndarray:
    """Unique solution of pi = gamma s + (1 - gamma) W pi with W = (I + M) / 2."""
    if not (0.0 < gamma <= 1.0):
        raise GammaOutOfRangeError(f"teleportation must be in (0, 1], got {gamma}")
    s = _check_preference(s)
    if gamma == 1.0:
        return s.copy()
    m = build_walk_matrices(g).M
    w = 0.5 * (np.eye(g.n) + m)
    system = np.eye(g.n) - (1.0 - gamma) * w
    try:
        return gamma * np.linalg.solve(system, s)
    except np.linalg.LinAlgError as exc:
        raise SingularResolventError(str(exc)) from exc


def _symmetrized_walk_eigenvalues(basis: SpectralBasis, alpha: float) -> np.ndarray:
    # D^-1/2 W_alpha D^1/2 = I - (1 - alpha) L shares eigenvectors with L
    return 1.0 - (1.0 - alpha) * basis.eigenvalues


def lazy_walk_power(g: Graph, alpha: float, k: float) -> np.ndarray:
    """k-th power of the lazy walk, W_alpha^k = D^1/2 (I - (1-alpha) L)^k D^-1/2.

    Integer k reproduces repeated dense multiplication on the full space.
    Fractional k is defined through the symmetric conjugate and requires its
    subspace eigenvalues to be nonnegative (within 1e-10).
    """
    if not (0.0 <= alpha <= 1.0):
        raise AlphaOutOfRangeError(f"laziness must be in [0, 1], got {alpha}")
    if not k >= 0.0:
        raise InputError(f"power must be >= 0, got {k}")
    wm = build_walk_matrices(g)
    basis = decompose(wm.L, g.degrees)
    walk_eigs = _symmetrized_walk_eigenvalues(basis, alpha)
    integral = float(k).is_integer()
    if integral:
        powered = walk_eigs ** int(k)
    else:
        sub = walk_eigs[basis.nontrivial_mask]
        if np.min(sub) < -1e-10:
            raise NegativeEigenvalueFractionalPowerError(
                f"symmetrized walk has subspace eigenvalue {np.min(sub)} < 0; "
                f"fractional power {k} undefined"
            )
        powered = np.clip(walk_eigs, 0.0, None) ** k
    v = basis.eigenvectors
    conjugate_power = (v * powered) @ v.T
    sqrt_d = np.sqrt(g.degrees)
    return conjugate_power * sqrt_d[:, np.newaxis] / sqrt_d[np.newaxis, :]


def power_demo(
    g: Graph, alpha: float, k: int, v0: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized power iteration with the symmetrized lazy walk.

    Returns the trajectory v0, W' v0, ..., W'^k v0 (rows) together with the
    Rayleigh quotient v^T L v / v^T v of each iterate after projecting off the
    trivial direction. No renormalization is applied; the top eigenvalue of W'
    is one, so the iterates stay bounded.
    """
    if not (0.0 <= alpha <= 1.0):
        raise AlphaOutOfRangeError(f"laziness must be in [0, 1], got {alpha}")
    if k < 0 or int(k) != k:
        raise InputError(f"step count must be a nonnegative integer, got {k}")
    v0 = np.asarray(v0, dtype=float)
    if not np.linalg.norm(v0) > 0.0:
        raise ZeroStartVectorError("start vector is zero")
    wm = build_walk_matrices(g)
    lap = wm.L
    walk = np.eye(g.n) - (1.0 - alpha) * lap
    u = np.sqrt(g.degrees)
    u = u / np.linalg.norm(u)

    trajectory = np.empty((int(k) + 1, g.n))
    rayleigh = np.empty(int(k) + 1)
    v = v0.copy()
    for step in range(int(k) + 1):
        if step > 0:
            v = walk @ v
        trajectory[step] = v
        w = v - u * (u @ v)
        norm_sq = float(w @ w)
        rayleigh[step] = float(w @ lap @ w) / norm_sq if norm_sq > 0.0 else float("nan")
    return trajectory, rayleigh
