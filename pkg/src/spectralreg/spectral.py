"""Eigendecomposition of the normalized Laplacian and density matrices.

Everything downstream works on the subspace orthogonal to D^1/2 1. The
eigenpair spanning that direction is kept in the decomposition but flagged as
trivial, so operators stay in ambient coordinates while traces, identities and
density matrices are restricted by filtering it out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    DegenerateTrivialSpaceError,
    InternalCheckError,
    NegativeWeightError,
    SingularFunctionValueError,
)

TRIVIAL_EIGENVALUE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Ascending eigendecomposition of a normalized Laplacian.

    ``eigenvalues[trivial_index]`` is the (unique) near-zero eigenvalue whose
    eigenvector is proportional to D^1/2 1; all other eigenvalues are strictly
    positive for a connected graph.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    trivial_index: int
    degrees: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def nontrivial_mask(self) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        mask[self.trivial_index] = False
        return mask

    @property
    def nontrivial_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[self.nontrivial_mask]

    @property
    def trivial_vector(self) -> np.ndarray:
        return self.eigenvectors[:, self.trivial_index]

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the nontrivial subspace."""
        u = self.trivial_vector
        return np.eye(self.n) - np.outer(u, u)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    fixed = vectors.copy()
    for j in range(fixed.shape[1]):
        col = fixed[:, j]
        nonzero = np.flatnonzero(np.abs(col) > 1e-12)
        if nonzero.size and col[nonzero[0]] < 0:
            fixed[:, j] = -col
    return fixed


def decompose(laplacian: np.ndarray, degrees: np.ndarray) -> SpectralBasis:
    """Eigendecompose a normalized Laplacian built from a connected graph.

    Deterministic for identical input: eigenvalues ascend and each eigenvector
    has its first coordinate above 1e-12 in absolute value made positive.
    """
    laplacian = np.asarray(laplacian, dtype=float)
    degrees = np.asarray(degrees, dtype=float)
    eigenvalues, eigenvectors = np.linalg.eigh(laplacian)
    eigenvectors = _fix_signs(eigenvectors)

    near_zero = np.flatnonzero(np.abs(eigenvalues) <= TRIVIAL_EIGENVALUE_TOL)
    if near_zero.size != 1:
        raise DegenerateTrivialSpaceError(
            f"expected exactly one near-zero eigenvalue, found {near_zero.size} "
            f"(spectrum head: {eigenvalues[:4]})"
        )
    trivial_index = int(near_zero[0])

    kernel_vec = np.sqrt(degrees)
    kernel_vec = kernel_vec / np.linalg.norm(kernel_vec)
    cosine = abs(float(eigenvectors[:, trivial_index] @ kernel_vec))
    if cosine < 1.0 - 1e-10:
        raise InternalCheckError(
            f"trivial eigenvector misaligned with D^1/2 1 (cosine {cosine})"
        )
    recon = (eigenvectors * eigenvalues) @ eigenvectors.T
    if np.max(np.abs(recon - laplacian)) > 1e-9:
        raise InternalCheckError("eigendecomposition does not reconstruct the input")
    gram = eigenvectors.T @ eigenvectors
    if np.max(np.abs(gram - np.eye(laplacian.shape[0]))) > 1e-10:
        raise InternalCheckError("eigenvectors are not orthonormal")

    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return SpectralBasis(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        trivial_index=trivial_index,
        degrees=degrees,
    )


def apply_spectral_function(basis: SpectralBasis, f: Callable[[float], float]) -> np.ndarray:
    """Apply a scalar function to the operator restricted to the nontrivial subspace.

    Returns sum of f(l_i) v_i v_i^T over nontrivial eigenpairs; the trivial
    direction is annihilated.
    """
    mask = basis.nontrivial_mask
    values = np.array([float(f(l)) for l in basis.eigenvalues[mask]])
    if not np.all(np.isfinite(values)):
        bad = basis.eigenvalues[mask][~np.isfinite(values)]
        raise SingularFunctionValueError(f"function not finite at eigenvalues {bad}")
    vectors = basis.eigenvectors[:, mask]
    return (vectors * values) @ vectors.T


def subspace_trace(matrix: np.ndarray, basis: SpectralBasis) -> float:
    """Trace of P m P where P projects off the trivial direction."""
    u = basis.trivial_vector
    return float(np.trace(matrix) - u @ matrix @ u)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace PSD operator on the nontrivial subspace.

    Represented by nonnegative weights over the nontrivial eigenpairs of its
    basis, summing to one.
    """

    basis: SpectralBasis
    weights: np.ndarray

    def dense(self) -> np.ndarray:
        mask = self.basis.nontrivial_mask
        vectors = self.basis.eigenvectors[:, mask]
        return (vectors * self.weights) @ vectors.T

    def sqrt(self) -> np.ndarray:
        mask = self.basis.nontrivial_mask
        vectors = self.basis.eigenvectors[:, mask]
        return (vectors * np.sqrt(self.weights)) @ vectors.T

    def objective(self) -> float:
        """SDP objective L . X in basis coordinates."""
        return float(self.basis.nontrivial_eigenvalues @ self.weights)

    def to_json_dict(self, include_dense: bool = False) -> dict:
        out = {
            "weights": [float(w) for w in self.weights],
            "eigenvalues": [float(l) for l in self.basis.nontrivial_eigenvalues],
        }
        if include_dense:
            out["dense"] = [[float(x) for x in row] for row in self.dense()]
        return out


def density_from_weights(basis: SpectralBasis, weights: np.ndarray) -> DensityMatrix:
    """Validate weights (nonnegative, sum 1 within 1e-8) and renormalize exactly."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (basis.n - 1,):
        raise NegativeWeightError(
            f"expected {basis.n - 1} weights, got shape {weights.shape}"
        )
    if not np.all(np.isfinite(weights)):
        raise NegativeWeightError("weights must be finite")
    if np.min(weights) < -1e-12:
        raise NegativeWeightError(f"negative weight {np.min(weights)}")
    total = float(weights.sum())
    if abs(total - 1.0) > 1e-8:
        raise NegativeWeightError(f"weights sum to {total}, expected 1 within 1e-8")
    weights = np.clip(weights, 0.0, None) / np.clip(weights, 0.0, None).sum()
    weights.setflags(write=False)
    return DensityMatrix(basis=basis, weights=weights)
