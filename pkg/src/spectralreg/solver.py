"""Closed-form solver for the regularized spectral relaxation.

The program is: minimize L . X + (1/eta) F(X) over unit-trace PSD X supported
on the nontrivial subspace. Stationarity gives X = (grad F)^-1(eta (lam I - L))
with the scalar multiplier lam fixed by the unit-trace condition, so solving
reduces to a one-dimensional root find over lam per regularizer:

* entropy: lam has a closed form (shifted log-sum-exp), weights are a softmax
  of -eta times the spectrum;
* logdet:  lam lies in (-inf, l_min) where the trace is strictly increasing;
* pnorm:   lam lies in [l_max, inf); if the trace already exceeds one at
  l_max there is no interior multiplier and the solver reports failure
  (the true optimum then has active positivity constraints).

``oracle_solve`` is an independent check: projected gradient descent over the
weight simplex, refined by exact two-coordinate exchanges, never touching the
closed forms above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BisectionFailureError,
    DomainError,
    EtaNonPositiveError,
    InternalCheckError,
    NonConvergenceError,
    RangeError,
)
from .regularizers import Regularizer, alpha_from_lambda, gamma_from_lambda
from .spectral import DensityMatrix, SpectralBasis, density_from_weights

TRACE_TOL = 1e-12
MAX_BISECT = 200
BRACKET_LIMIT = 1e12


@dataclass(frozen=True)
class SolveReport:
    """Solution summary: multiplier, weights, mapped diffusion parameter, residuals."""

    eta: float
    lambda_star: float
    weights: np.ndarray
    mapped_param: float | None
    trace_residual: float
    psd_margin: float
    duality_gap: float
    objective: float

    def to_json_dict(self) -> dict:
        return {
            "eta": self.eta,
            "lambda_star": self.lambda_star,
            "weights": [float(w) for w in self.weights],
            "mapped_param": self.mapped_param,
            "trace_residual": self.trace_residual,
            "psd_margin": self.psd_margin,
            "duality_gap": self.duality_gap,
            "objective": self.objective,
        }


def _trace_at(reg: Regularizer, spectrum: np.ndarray, eta: float, lam: float) -> float:
    return float(np.sum(reg.grad_inverse(eta * (lam - spectrum))))


def _trace_derivative(reg: Regularizer, spectrum: np.ndarray, eta: float, lam: float) -> float:
    if reg.kind == "logdet":
        return float(np.sum(1.0 / (eta * (spectrum - lam) ** 2)))
    exponent = 1.0 / (reg.p - 1.0)
    gaps = eta * (lam - spectrum)
    with np.errstate(divide="ignore"):
        return float(np.sum(eta * exponent * gaps ** (exponent - 1.0)))


def _bisect_lambda(
    reg: Regularizer, spectrum: np.ndarray, eta: float, lo: float, hi: float
) -> float:
    t_lo = _trace_at(reg, spectrum, eta, lo)
    t_hi = _trace_at(reg, spectrum, eta, hi)
    t_mid = _trace_at(reg, spectrum, eta, 0.5 * (lo + hi))
    if not (t_lo <= 1.0 <= t_hi) or not (t_lo <= t_mid <= t_hi):
        raise InternalCheckError(
            f"trace not increasing across bracket [{lo}, {hi}]: "
            f"{t_lo}, {t_mid}, {t_hi}"
        )
    if max(abs(lo), abs(hi)) > BRACKET_LIMIT:
        raise BisectionFailureError(f"bracket escaped to [{lo}, {hi}]")

    lam = 0.5 * (lo + hi)
    for _ in range(MAX_BISECT):
        lam = 0.5 * (lo + hi)
        t = _trace_at(reg, spectrum, eta, lam)
        if abs(t - 1.0) <= TRACE_TOL:
            break
        if t < 1.0:
            lo = lam
        else:
            hi = lam
        if hi - lo <= 1e-17 * max(1.0, abs(lam)):
            break
    # newton polish; the trace is smooth and strictly increasing at the root
    for _ in range(6):
        t = _trace_at(reg, spectrum, eta, lam)
        dt = _trace_derivative(reg, spectrum, eta, lam)
        if not (np.isfinite(t) and np.isfinite(dt)) or dt <= 0.0:
            break
        step = (t - 1.0) / dt
        candidate = lam - step
        if not (lo <= candidate <= hi):
            break
        lam = candidate
        if abs(step) <= 1e-17 * max(1.0, abs(lam)):
            break
    return lam


def _solve_lambda(reg: Regularizer, spectrum: np.ndarray, eta: float) -> float:
    m = spectrum.shape[0]
    if reg.kind == "entropy":
        l_min = float(np.min(spectrum))
        return l_min - math.log(float(np.sum(np.exp(-eta * (spectrum - l_min))))) / eta
    if reg.kind == "logdet":
        l_min = float(np.min(spectrum))
        lo = l_min - m / eta - 1.0
        hi = l_min - 0.9 / (eta * m)
        return _bisect_lambda(reg, spectrum, eta, lo, hi)
    l_max = float(np.max(spectrum))
    boundary_trace = _trace_at(reg, spectrum, eta, l_max)
    if boundary_trace > 1.0:
        raise BisectionFailureError(
            f"no unit-trace multiplier at or above the top eigenvalue {l_max}: "
            f"trace there is already {boundary_trace} (eta={eta}, p={reg.p}); "
            f"the optimum has active positivity constraints and is outside the "
            f"closed form"
        )
    hi = l_max + 1.0 / eta
    while _trace_at(reg, spectrum, eta, hi) < 1.0:
        hi = l_max + 2.0 * (hi - l_max)
        if hi > BRACKET_LIMIT:
            raise BisectionFailureError(f"upper bracket escaped to {hi}")
    return _bisect_lambda(reg, spectrum, eta, l_max, hi)


def _map_parameter(reg: Regularizer, eta: float, lam: float) -> float | None:
    if reg.kind == "entropy":
        return eta
    if reg.kind == "logdet":
        return gamma_from_lambda(lam) if lam < 0.0 else None
    return alpha_from_lambda(lam)


def solve(basis: SpectralBasis, reg: Regularizer, eta: float) -> tuple[DensityMatrix, SolveReport]:
    """Solve the regularized relaxation in closed form."""
    if not eta > 0.0:
        raise EtaNonPositiveError(f"regularization strength must be > 0, got {eta}")
    spectrum = basis.nontrivial_eigenvalues
    lam = _solve_lambda(reg, spectrum, eta)

    if reg.kind == "entropy":
        raw = np.exp(-eta * (spectrum - np.min(spectrum)))
    else:
        raw = reg.grad_inverse(eta * (lam - spectrum))
    weights = raw / raw.sum()
    density = density_from_weights(basis, weights)

    objective = float(spectrum @ weights)
    primal = objective + reg.value(weights) / eta
    gap = primal - dual_value(basis, reg, eta, lam)
    report = SolveReport(
        eta=float(eta),
        lambda_star=float(lam),
        weights=density.weights,
        mapped_param=_map_parameter(reg, eta, lam),
        trace_residual=abs(float(density.weights.sum()) - 1.0),
        psd_margin=float(np.min(density.weights)),
        duality_gap=float(gap),
        objective=objective,
    )
    return density, report


def dual_value(basis: SpectralBasis, reg: Regularizer, eta: float, lam: float) -> float:
    """Lagrangian dual evaluated at (lam, U = 0).

    Plugs the stationary point X(lam) = (grad F)^-1(eta (lam I - L)) into
    L . X + (1/eta) F(X) - lam (tr X - 1). At the optimal multiplier this
    equals the primal value, certifying optimality by weak duality.
    """
    if not eta > 0.0:
        raise EtaNonPositiveError(f"regularization strength must be > 0, got {eta}")
    spectrum = basis.nontrivial_eigenvalues
    reg.check_lambda(spectrum, lam)
    mu = reg.grad_inverse(eta * (lam - spectrum))
    return float(spectrum @ mu + reg.value(mu) / eta - lam * (mu.sum() - 1.0))


# independent simplex solver -------------------------------------------------

def _project_simplex(v: np.ndarray) -> np.ndarray:
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u)
    rho = np.nonzero(u + (1.0 - cumulative) / np.arange(1, v.size + 1) > 0.0)[0][-1]
    shift = (1.0 - cumulative[rho]) / (rho + 1.0)
    return np.maximum(v + shift, 0.0)


def _objective_fns(reg: Regularizer, spectrum: np.ndarray, eta: float):
    def f(mu: np.ndarray) -> float:
        if reg.kind == "logdet" and np.min(mu) <= 0.0:
            return math.inf
        return float(spectrum @ mu) + reg.value(mu) / eta

    def grad(mu: np.ndarray) -> np.ndarray:
        if reg.kind == "entropy":
            return spectrum + np.log(np.maximum(mu, 1e-300)) / eta
        if reg.kind == "logdet":
            return spectrum - 1.0 / (eta * np.maximum(mu, 1e-300))
        return spectrum + np.clip(mu, 0.0, None) ** (reg.p - 1.0) / eta

    return f, grad


def _projected_gradient(f, grad, start: np.ndarray, max_iter: int) -> np.ndarray:
    mu = start.copy()
    value = f(mu)
    step = 1.0
    for _ in range(max_iter):
        g = grad(mu)
        while True:
            candidate = _project_simplex(mu - step * g)
            cand_value = f(candidate)
            move = candidate - mu
            if math.isfinite(cand_value) and cand_value <= value + g @ move + (move @ move) / (
                2.0 * step
            ):
                break
            step *= 0.5
            if step < 1e-18:
                break
        if step < 1e-18 or np.linalg.norm(move) < 1e-15:
            break
        mu, value = candidate, cand_value
        step = min(step * 2.0, 1e6)
    return mu


def _exchange_split(reg: Regularizer, eta: float, gap: float, total: float) -> float:
    """Minimizer x of the two-coordinate exchange subproblem on [0, total].

    Solves phi'(x) - phi'(total - x) = eta * gap where phi is the scalar
    regularizer term and gap the eigenvalue difference (l_j - l_i).
    """
    c = eta * gap
    if reg.kind == "entropy":
        if c > 700.0:
            return total
        if c < -700.0:
            return 0.0
        return total / (1.0 + math.exp(-c))
    if reg.kind == "logdet":
        # -1/x + 1/(total - x) = c  <=>  c x^2 + (2 - c total) x - total = 0;
        # exactly one root lies in (0, total), recovered cancellation-free via
        # the stable quadratic split q = -(b + sign(b) sqrt(disc)) / 2
        if c == 0.0:
            return 0.5 * total
        b = 2.0 - c * total
        disc = math.sqrt(b * b + 4.0 * c * total)
        q = -0.5 * (b + math.copysign(disc, b))
        for root in (q / c, -total / q):
            if 0.0 < root < total:
                return root
        return 0.5 * total  # unreachable fallback at extreme rounding
    if reg.p == 2.0:
        return min(max(0.5 * (total + c), 0.0), total)
    # x^{p-1} - (total-x)^{p-1} = c, safeguarded newton on an increasing function
    exponent = reg.p - 1.0

    def deriv(x: float) -> float:
        return x**exponent - (total - x) ** exponent - c

    if deriv(0.0) >= 0.0:
        return 0.0
    if deriv(total) <= 0.0:
        return total
    lo, hi = 0.0, total
    x = 0.5 * total
    for _ in range(100):
        val = deriv(x)
        if val > 0.0:
            hi = x
        else:
            lo = x
        curvature = exponent * (
            max(x, 1e-300) ** (exponent - 1.0) + max(total - x, 1e-300) ** (exponent - 1.0)
        )
        candidate = x - val / curvature if curvature > 0.0 else 0.5 * (lo + hi)
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)
        if hi - lo < 1e-17 * (1.0 + total):
            break
        x = candidate
    return x


def _pairwise_exchange(
    reg: Regularizer, spectrum: np.ndarray, eta: float, mu: np.ndarray, max_passes: int
) -> np.ndarray:
    mu = mu.copy()
    m = mu.size
    for _ in range(max_passes):
        moved = 0.0
        for i in range(m):
            for j in range(i + 1, m):
                total = mu[i] + mu[j]
                if total <= 0.0:
                    continue
                x = _exchange_split(reg, eta, float(spectrum[j] - spectrum[i]), total)
                shift = x - mu[i]
                if shift != 0.0:
                    mu[i] = x
                    mu[j] = total - x
                    moved = max(moved, abs(shift))
        if moved < 1e-16:
            break
    return mu


def oracle_solve(
    basis: SpectralBasis,
    reg: Regularizer,
    eta: float,
    *,
    restarts: int = 10,
    seed: int = 0,
    gradient_steps: int = 200,
    exchange_passes: int = 500,
) -> np.ndarray:
    """Independently minimize the weight-space objective over the simplex.

    Projected gradient descent with backtracking from each seeded restart,
    followed by exact two-coordinate exchange refinement. Restarts stop early
    once two consecutive results coincide to 1e-12 (the problem is convex;
    restarts only guard against step-size misconfiguration).
    """
    if not eta > 0.0:
        raise EtaNonPositiveError(f"regularization strength must be > 0, got {eta}")
    spectrum = basis.nontrivial_eigenvalues
    m = spectrum.shape[0]
    if m > 50:
        raise DomainError(f"oracle is desk-scale only (dimension {m} > 50)")
    f, grad = _objective_fns(reg, spectrum, eta)
    rng = np.random.default_rng(seed)

    results: list[np.ndarray] = []
    for restart in range(max(1, restarts)):
        if restart == 0:
            start = np.full(m, 1.0 / m)
        else:
            start = rng.random(m) + 0.05
            start /= start.sum()
        mu = _projected_gradient(f, grad, start, gradient_steps)
        mu = _pairwise_exchange(reg, spectrum, eta, mu, exchange_passes)
        results.append(mu)
        if len(results) >= 2 and np.max(np.abs(results[-1] - results[-2])) < 1e-12:
            break

    best = min(results, key=f)
    residual = float(np.linalg.norm(best - _project_simplex(best - grad(best))))
    if residual > 1e-7:
        raise NonConvergenceError(
            f"projected-gradient residual {residual} above 1e-7 after "
            f"{gradient_steps} steps and {exchange_passes} exchange passes"
        )
    return best


# optimality certificate ------------------------------------------------------

@dataclass(frozen=True)
class OptimalityCertificate:
    """Residuals of the three sufficient optimality conditions plus the gap."""

    lambda_candidate: float
    lambda_spread: float
    trace_residual: float
    psd_margin: float
    duality_gap: float
    passed: bool

    def to_json_dict(self) -> dict:
        def _num(x: float):
            return x if math.isfinite(x) else None

        return {
            "lambda_candidate": _num(self.lambda_candidate),
            "lambda_spread": _num(self.lambda_spread),
            "trace_residual": _num(self.trace_residual),
            "psd_margin": _num(self.psd_margin),
            "duality_gap": _num(self.duality_gap),
            "pass": self.passed,
        }


def verify_optimality(
    basis: SpectralBasis, reg: Regularizer, eta: float, density: DensityMatrix
) -> OptimalityCertificate:
    """Check the sufficient optimality conditions on a candidate solution.

    Recovers a multiplier per coordinate from stationarity, then checks that
    the spread is tiny, the trace is one, the weights are nonnegative and the
    duality gap at the recovered multiplier vanishes. A failing certificate is
    a result, not an error.
    """
    if not eta > 0.0:
        raise EtaNonPositiveError(f"regularization strength must be > 0, got {eta}")
    spectrum = basis.nontrivial_eigenvalues
    mu = density.weights

    with np.errstate(divide="ignore", invalid="ignore"):
        if reg.kind == "entropy":
            grads = np.log(mu)
        elif reg.kind == "logdet":
            grads = -1.0 / mu
        else:
            grads = mu ** (reg.p - 1.0)
    candidates = spectrum + grads / eta
    finite = candidates[np.isfinite(candidates)]
    if finite.size == mu.size:
        spread = float(np.max(candidates) - np.min(candidates))
        lam = float(np.mean(candidates))
    else:
        spread = math.inf
        lam = float(np.mean(finite)) if finite.size else math.nan

    trace_residual = abs(float(mu.sum()) - 1.0)
    psd_margin = float(np.min(mu))

    gap = math.nan
    if math.isfinite(lam):
        try:
            primal = float(spectrum @ mu) + reg.value(mu) / eta
            gap = primal - dual_value(basis, reg, eta, lam)
        except (DomainError, RangeError):
            gap = math.nan

    passed = (
        math.isfinite(spread)
        and spread <= 1e-8
        and trace_residual <= 1e-10
        and psd_margin >= -1e-12
        and math.isfinite(gap)
        and -1e-9 <= gap <= 1e-8
    )
    return OptimalityCertificate(
        lambda_candidate=lam,
        lambda_spread=spread,
        trace_residual=trace_residual,
        psd_margin=psd_margin,
        duality_gap=float(gap),
        passed=bool(passed),
    )
