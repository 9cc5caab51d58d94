"""Numerical certification that regularized optima equal diffusion operators.

Each check solves the regularized relaxation in closed form, builds the
corresponding diffusion operator (heat kernel, degree-conjugated PageRank
resolvent, or degree-conjugated lazy-walk power), projects both to the
subspace orthogonal to D^1/2 1, normalizes the diffusion side by its subspace
trace, and reports the entrywise deviation. The full-space trace is reported
alongside so the difference between the two trace conventions stays visible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diffusion import heat_kernel, lazy_walk_power, pagerank_operator
from .errors import (
    AlphaOutOfRangeError,
    AlphaTooSmallForFractionalPowerError,
    SpectralRegError,
)
from .graphs import Graph, build_walk_matrices
from .regularizers import (
    entropy,
    eta_for_alpha_from_spectrum,
    eta_for_gamma_from_spectrum,
    lambda_from_alpha,
    log_det,
    p_norm,
)
from .solver import SolveReport, solve
from .spectral import SpectralBasis, decompose, subspace_trace

PASS_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class EquivalenceReport:
    """Outcome of one equivalence check; ``passed`` is deviation <= 1e-8."""

    lemma: str
    eta: float
    diffusion_param: float
    max_abs_deviation: float
    trace_subspace: float
    trace_fullspace: float
    trace_convention: str
    passed: bool
    lambda_star: float | None = None
    error: str | None = None
    sdp_matrix: np.ndarray | None = field(default=None, repr=False)
    diffusion_matrix: np.ndarray | None = field(default=None, repr=False)

    def to_json_dict(self) -> dict:
        def _num(x):
            if x is None or not np.isfinite(x):
                return None
            return float(x)

        return {
            "lemma": self.lemma,
            "eta": _num(self.eta),
            "diffusion_param": _num(self.diffusion_param),
            "max_abs_deviation": _num(self.max_abs_deviation),
            "trace_subspace": _num(self.trace_subspace),
            "trace_fullspace": _num(self.trace_fullspace),
            "trace_convention": self.trace_convention,
            "pass": self.passed,
            "lambda_star": _num(self.lambda_star),
            "error": self.error,
        }

    def to_csv_row(self) -> list[str]:
        dev = "" if not np.isfinite(self.max_abs_deviation) else repr(float(self.max_abs_deviation))
        return [
            self.lemma,
            repr(float(self.diffusion_param)) if np.isfinite(self.diffusion_param) else "",
            repr(float(self.eta)) if np.isfinite(self.eta) else "",
            dev,
            "true" if self.passed else "false",
        ]


CSV_HEADER = ["lemma", "param", "eta", "deviation", "pass"]


def _prepared(g: Graph) -> tuple[SpectralBasis, np.ndarray]:
    wm = build_walk_matrices(g)
    basis = decompose(wm.L, g.degrees)
    return basis, wm.L


def _compare(
    lemma: str,
    eta: float,
    diffusion_param: float,
    basis: SpectralBasis,
    report: SolveReport,
    sdp_dense: np.ndarray,
    diffusion_conjugate: np.ndarray,
) -> EquivalenceReport:
    projector = basis.projector()
    projected = projector @ diffusion_conjugate @ projector
    tr_sub = subspace_trace(diffusion_conjugate, basis)
    tr_full = float(np.trace(diffusion_conjugate))
    target = projected / tr_sub
    deviation = float(np.max(np.abs(sdp_dense - target)))
    return EquivalenceReport(
        lemma=lemma,
        eta=float(eta),
        diffusion_param=float(diffusion_param),
        max_abs_deviation=deviation,
        trace_subspace=tr_sub,
        trace_fullspace=tr_full,
        trace_convention="subspace",
        passed=bool(deviation <= PASS_TOL),
        lambda_star=report.lambda_star,
        sdp_matrix=sdp_dense,
        diffusion_matrix=target,
    )


def check_heat_kernel_lemma(g: Graph, eta: float) -> EquivalenceReport:
    """Entropy optimum versus the trace-normalized heat kernel at t = eta."""
    basis, _ = _prepared(g)
    density, report = solve(basis, entropy(), eta)
    kernel = heat_kernel(basis, eta)
    # the kernel already lives on the subspace; its full-space variant adds
    # the unit trivial eigenvalue
    tr_sub = subspace_trace(kernel, basis)
    target = kernel / tr_sub
    deviation = float(np.max(np.abs(density.dense() - target)))
    return EquivalenceReport(
        lemma="HeatKernel",
        eta=float(eta),
        diffusion_param=float(eta),
        max_abs_deviation=deviation,
        trace_subspace=tr_sub,
        trace_fullspace=tr_sub + 1.0,
        trace_convention="subspace",
        passed=bool(deviation <= PASS_TOL),
        lambda_star=report.lambda_star,
        sdp_matrix=density.dense(),
        diffusion_matrix=target,
    )


def check_pagerank_lemma(g: Graph, gamma: float) -> EquivalenceReport:
    """Logdet optimum versus the degree-conjugated, trace-normalized resolvent."""
    basis, _ = _prepared(g)
    eta = eta_for_gamma_from_spectrum(basis.nontrivial_eigenvalues, gamma)
    density, report = solve(basis, log_det(), eta)
    resolvent = pagerank_operator(g, gamma)
    inv_sqrt_d = 1.0 / np.sqrt(g.degrees)
    conjugate = resolvent * inv_sqrt_d[:, np.newaxis] * np.sqrt(g.degrees)[np.newaxis, :]
    return _compare("PageRank", eta, gamma, basis, report, density.dense(), conjugate)


def check_lazy_walk_lemma(g: Graph, alpha: float, q_minus_1: float) -> EquivalenceReport:
    """Pnorm optimum versus q-1 degree-conjugated lazy walk steps."""
    if not q_minus_1 > 0.0:
        raise AlphaOutOfRangeError(f"step count must be > 0, got {q_minus_1}")
    if not (0.0 <= alpha < 1.0):
        raise AlphaOutOfRangeError(
            f"laziness must be in [0, 1) for the walk correspondence, got {alpha}"
        )
    basis, _ = _prepared(g)
    spectrum = basis.nontrivial_eigenvalues
    l_max = float(np.max(spectrum))
    threshold = 1.0 - 1.0 / l_max
    if not float(q_minus_1).is_integer() and alpha < threshold - 1e-12:
        raise AlphaTooSmallForFractionalPowerError(
            f"laziness {alpha} below the PSD threshold {threshold} with "
            f"fractional step count {q_minus_1}"
        )
    lambda_from_alpha(alpha)  # validates alpha < 1 (finite multiplier)
    p = 1.0 + 1.0 / q_minus_1
    eta = eta_for_alpha_from_spectrum(spectrum, alpha, q=q_minus_1 + 1.0)
    density, report = solve(basis, p_norm(p), eta)
    walk_power = lazy_walk_power(g, alpha, q_minus_1)
    inv_sqrt_d = 1.0 / np.sqrt(g.degrees)
    conjugate = walk_power * inv_sqrt_d[:, np.newaxis] * np.sqrt(g.degrees)[np.newaxis, :]
    return _compare("LazyWalk", eta, alpha, basis, report, density.dense(), conjugate)


@dataclass(frozen=True)
class SuiteConfig:
    """Parameter sweeps for the full equivalence suite.

    The default laziness values sit above 1 - 1/l_max for every graph, since
    normalized Laplacian eigenvalues never exceed 2.
    """

    heat_etas: tuple[float, ...] = (0.01, 0.1, 1.0, 10.0)
    gammas: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    alphas: tuple[float, ...] = (0.55, 0.7, 0.9)
    walk_steps: tuple[float, ...] = (1.0, 2.0, 3.0)


def _failed_entry(lemma: str, param: float, exc: SpectralRegError) -> EquivalenceReport:
    return EquivalenceReport(
        lemma=lemma,
        eta=float("nan"),
        diffusion_param=param,
        max_abs_deviation=float("nan"),
        trace_subspace=float("nan"),
        trace_fullspace=float("nan"),
        trace_convention="subspace",
        passed=False,
        error=f"{type(exc).__name__}: {exc}",
    )


def full_suite(g: Graph, config: SuiteConfig | None = None) -> list[EquivalenceReport]:
    """Run all three checks over the configured sweeps.

    Member errors become failed entries rather than aborting the suite.
    Results are ordered by lemma, then parameter.
    """
    config = config or SuiteConfig()
    reports: list[EquivalenceReport] = []
    for eta in config.heat_etas:
        try:
            reports.append(check_heat_kernel_lemma(g, eta))
        except SpectralRegError as exc:
            reports.append(_failed_entry("HeatKernel", eta, exc))
    for gamma in config.gammas:
        try:
            reports.append(check_pagerank_lemma(g, gamma))
        except SpectralRegError as exc:
            reports.append(_failed_entry("PageRank", gamma, exc))
    for steps in config.walk_steps:
        for alpha in config.alphas:
            try:
                reports.append(check_lazy_walk_lemma(g, alpha, steps))
            except SpectralRegError as exc:
                reports.append(_failed_entry("LazyWalk", alpha, exc))
    def _key(r: EquivalenceReport):
        param = r.diffusion_param if np.isfinite(r.diffusion_param) else float("inf")
        eta = r.eta if np.isfinite(r.eta) else float("inf")
        return (r.lemma, param, eta)

    reports.sort(key=_key)
    return reports
