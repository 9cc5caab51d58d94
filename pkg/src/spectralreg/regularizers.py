"""Spectral regularizers and the multiplier-to-diffusion parameter maps.

The three regularizers act on the eigenvalue weights of a density matrix
(rotation invariance makes the spectrum representation lossless):

* entropy:  sum(mu log mu) - sum(mu); inverse gradient exp(y)
* logdet:   -sum(log mu);             inverse gradient -1/y (y < 0)
* pnorm:    (1/p) sum(mu^p), p > 1;   inverse gradient y^(1/(p-1)) (y >= 0)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphaOutOfRangeError,
    DomainError,
    GammaOutOfRangeError,
    LambdaOutOfRangeError,
    RangeError,
)
from .graphs import Graph, build_walk_matrices
from .spectral import decompose

KINDS = ("entropy", "logdet", "pnorm")


@dataclass(frozen=True)
class Regularizer:
    """One of the three regularizers; ``p`` is used only for kind ``pnorm``."""

    kind: str
    p: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown regularizer kind {self.kind!r}")
        if self.kind == "pnorm":
            if self.p is None or not self.p > 1.0:
                raise DomainError(f"pnorm requires p > 1, got {self.p}")
        elif self.p is not None:
            raise DomainError(f"{self.kind} takes no exponent, got p={self.p}")

    @property
    def q(self) -> float:
        """Conjugate exponent, 1/p + 1/q = 1."""
        if self.kind != "pnorm":
            raise DomainError(f"{self.kind} has no conjugate exponent")
        return self.p / (self.p - 1.0)

    def value(self, mu: np.ndarray) -> float:
        mu = np.asarray(mu, dtype=float)
        if np.min(mu) < -1e-12:
            raise DomainError(f"negative weight {np.min(mu)}")
        if self.kind == "entropy":
            safe = np.where(mu > 0.0, mu, 1.0)
            return float(np.sum(mu * np.log(safe)) - np.sum(mu))
        if self.kind == "logdet":
            if np.min(mu) <= 0.0:
                raise DomainError("logdet undefined at a zero weight")
            return float(-np.sum(np.log(mu)))
        return float(np.sum(np.clip(mu, 0.0, None) ** self.p) / self.p)

    def grad(self, mu: np.ndarray) -> np.ndarray:
        mu = np.asarray(mu, dtype=float)
        if self.kind == "entropy":
            if np.min(mu) <= 0.0:
                raise DomainError("entropy gradient needs strictly positive weights")
            return np.log(mu)
        if self.kind == "logdet":
            if np.min(mu) <= 0.0:
                raise DomainError("logdet gradient needs strictly positive weights")
            return -1.0 / mu
        if np.min(mu) < 0.0:
            raise DomainError("pnorm gradient needs nonnegative weights")
        return mu ** (self.p - 1.0)

    def grad_inverse(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if self.kind == "entropy":
            return np.exp(y)
        if self.kind == "logdet":
            if np.max(y) >= 0.0:
                raise RangeError(f"logdet inverse gradient needs y < 0, got max {np.max(y)}")
            return -1.0 / y
        if np.min(y) < 0.0:
            raise RangeError(f"pnorm inverse gradient needs y >= 0, got min {np.min(y)}")
        return y ** (1.0 / (self.p - 1.0))

    def check_lambda(self, spectrum: np.ndarray, lam: float) -> None:
        """Require lam to keep eta (lam - l) in the inverse gradient's range."""
        if self.kind == "logdet" and lam >= np.min(spectrum):
            raise RangeError(
                f"logdet multiplier must stay below the smallest nontrivial "
                f"eigenvalue {np.min(spectrum)}, got {lam}"
            )
        if self.kind == "pnorm" and lam < np.max(spectrum):
            raise RangeError(
                f"pnorm multiplier must not fall below the largest eigenvalue "
                f"{np.max(spectrum)}, got {lam}"
            )


def entropy() -> Regularizer:
    return Regularizer("entropy")


def log_det() -> Regularizer:
    return Regularizer("logdet")


def p_norm(p: float) -> Regularizer:
    return Regularizer("pnorm", p=float(p))


def gamma_from_lambda(lam: float) -> float:
    """Teleportation gamma = lam / (lam - 1); decreasing, maps (-inf, 0) onto (0, 1)."""
    if not lam < 0.0:
        raise LambdaOutOfRangeError(f"gamma map needs lambda < 0, got {lam}")
    return lam / (lam - 1.0)


def lambda_from_gamma(gamma: float) -> float:
    if not (0.0 < gamma < 1.0):
        raise GammaOutOfRangeError(f"teleportation must be in (0, 1), got {gamma}")
    return gamma / (gamma - 1.0)


def alpha_from_lambda(lam: float) -> float:
    """Laziness alpha = (lam - 1) / lam; increasing, maps [1, inf) onto [0, 1)."""
    if not lam >= 1.0:
        raise LambdaOutOfRangeError(f"alpha map needs lambda >= 1, got {lam}")
    return (lam - 1.0) / lam


def lambda_from_alpha(alpha: float) -> float:
    if not (0.0 <= alpha < 1.0):
        raise AlphaOutOfRangeError(f"laziness must be in [0, 1), got {alpha}")
    return 1.0 / (1.0 - alpha)


def _subspace_spectrum(g: Graph) -> np.ndarray:
    basis = decompose(build_walk_matrices(g).L, g.degrees)
    return basis.nontrivial_eigenvalues


def eta_for_gamma_from_spectrum(spectrum: np.ndarray, gamma: float) -> float:
    lam = lambda_from_gamma(gamma)
    return float(np.sum(1.0 / (spectrum - lam)))


def eta_for_gamma(g: Graph, gamma: float) -> float:
    """Regularization strength whose logdet optimum matches PageRank at gamma.

    Equals the subspace trace of (L - lam I)^-1 at lam = gamma / (gamma - 1);
    strictly decreasing in gamma on (0, 1).
    """
    return eta_for_gamma_from_spectrum(_subspace_spectrum(g), gamma)


def eta_for_alpha_from_spectrum(spectrum: np.ndarray, alpha: float, q: float) -> float:
    if not q > 1.0:
        raise DomainError(f"conjugate exponent must exceed 1, got {q}")
    lam = lambda_from_alpha(alpha)
    l_max = float(np.max(spectrum))
    if lam < l_max - 1e-12:
        raise DomainError(
            f"laziness {alpha} puts the multiplier {lam} below the largest "
            f"eigenvalue {l_max}; the walk correspondence needs "
            f"alpha >= {1.0 - 1.0 / l_max}"
        )
    gaps = np.clip(lam - spectrum, 0.0, None)
    power_sum = float(np.sum(gaps ** (q - 1.0)))
    return power_sum ** (-1.0 / (q - 1.0))


def eta_for_alpha(g: Graph, alpha: float, q: float) -> float:
    """Regularization strength whose pnorm optimum matches q-1 lazy walk steps."""
    return eta_for_alpha_from_spectrum(_subspace_spectrum(g), alpha, q)
