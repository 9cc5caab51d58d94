"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Runs every criterion at its stated tolerance over the graph family
{K2, P3, K3, C4, C5, S4, seeded G(8, 1/2)}. The laziness values used for the
walk criterion sit above the positivity threshold 1 - 1/l_max for every graph
in the family (normalized Laplacian spectra never exceed 2).
"""

from __future__ import annotations

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from spectralreg import (
    SampleConfig,
    build_walk_matrices,
    check_heat_kernel_lemma,
    check_lazy_walk_lemma,
    check_pagerank_lemma,
    density_from_weights,
    empirical_second_moment,
    entropy,
    heat_kernel,
    lazy_pagerank_vector,
    log_det,
    oracle_solve,
    p_norm,
    pagerank_operator,
    pagerank_vector,
    sample_vector,
    solve,
    spectral_solve,
    verify_optimality,
)
from spectralreg import cli

from conftest import GRAPH_NAMES, GRAPH_TEXTS, basis_of, graph_named, random_simplex_points

HEAT_ETAS = (0.01, 0.1, 1.0, 10.0)
GAMMAS = (0.1, 0.3, 0.5, 0.7, 0.9)
WALK_STEPS = (1.0, 2.0, 3.0)
ALPHAS = (0.55, 0.7, 0.9)


def _announce(number: int, label: str):
    print(f"ACCEPTANCE criterion {number} ({label}): PASS")


@pytest.fixture(scope="module")
def sweep():
    """All criterion 1-3 solve configurations, solved once."""
    out = []
    for name in GRAPH_NAMES:
        g = graph_named(name)
        basis = basis_of(g)
        for eta in HEAT_ETAS:
            density, report = solve(basis, entropy(), eta)
            out.append((name, basis, entropy(), eta, density, report))
        for gamma in GAMMAS:
            from spectralreg import eta_for_gamma

            eta = eta_for_gamma(g, gamma)
            density, report = solve(basis, log_det(), eta)
            out.append((name, basis, log_det(), eta, density, report))
        for steps in WALK_STEPS:
            p = 1.0 + 1.0 / steps
            for alpha in ALPHAS:
                from spectralreg import eta_for_alpha

                eta = eta_for_alpha(g, alpha, q=steps + 1.0)
                density, report = solve(basis, p_norm(p), eta)
                out.append((name, basis, p_norm(p), eta, density, report))
    return out


def test_criterion_1_heat_kernel_equivalence():
    for name in GRAPH_NAMES:
        g = graph_named(name)
        for eta in HEAT_ETAS:
            report = check_heat_kernel_lemma(g, eta)
            assert report.max_abs_deviation <= 1e-8, (name, eta, report.max_abs_deviation)
            assert report.passed
    _announce(1, "entropy solve equals trace-normalized heat kernel, <= 1e-8")


def test_criterion_2_pagerank_equivalence():
    for name in GRAPH_NAMES:
        g = graph_named(name)
        for gamma in GAMMAS:
            report = check_pagerank_lemma(g, gamma)
            assert report.max_abs_deviation <= 1e-8, (name, gamma, report.max_abs_deviation)
            recovered_gamma = report.lambda_star / (report.lambda_star - 1.0)
            assert abs(recovered_gamma - gamma) <= 1e-10, (name, gamma, recovered_gamma)
    _announce(2, "logdet solve equals conjugated PageRank, gamma map <= 1e-10")


def test_criterion_3_lazy_walk_equivalence():
    for name in GRAPH_NAMES:
        g = graph_named(name)
        for steps in WALK_STEPS:
            for alpha in ALPHAS:
                report = check_lazy_walk_lemma(g, alpha, steps)
                assert report.max_abs_deviation <= 1e-8, (
                    name, alpha, steps, report.max_abs_deviation,
                )
                recovered_alpha = (report.lambda_star - 1.0) / report.lambda_star
                assert abs(recovered_alpha - alpha) <= 1e-10, (name, alpha, recovered_alpha)
    _announce(3, "pnorm solve equals conjugated lazy-walk power, alpha map <= 1e-10")


def test_criterion_4_optimality_certificates(sweep):
    for name, basis, reg, eta, density, _ in sweep:
        certificate = verify_optimality(basis, reg, eta, density)
        assert certificate.passed, (name, reg.kind, eta)
        assert certificate.duality_gap <= 1e-8
        assert certificate.lambda_spread <= 1e-8
        if basis.n > 2:
            eps = 1e-3
            bump = np.zeros(basis.n - 1)
            bump[0], bump[1] = eps, -eps
            if np.min(density.weights + bump) >= 0.0:
                perturbed = density_from_weights(basis, density.weights + bump)
                assert not verify_optimality(basis, reg, eta, perturbed).passed, (
                    name, reg.kind, eta,
                )
    _announce(4, "certificates pass on solutions, fail on 1e-3 perturbations")


def test_criterion_5_oracle_agreement(sweep):
    worst = 0.0
    for name, basis, reg, eta, density, _ in sweep:
        assert basis.n - 1 <= 10
        oracle_weights = oracle_solve(basis, reg, eta)
        deviation = float(np.max(np.abs(density.weights - oracle_weights)))
        worst = max(worst, deviation)
        assert deviation <= 1e-5, (name, reg.kind, eta, deviation)
    _announce(5, f"closed form vs simplex oracle <= 1e-5 (worst {worst:.2e})")


def test_criterion_6_diffusion_identities():
    g = graph_named("C5")
    basis = basis_of(g)
    wm = build_walk_matrices(g)
    # semigroup
    for s in (0.1, 0.5, 1.0):
        for t in (0.1, 0.5, 1.0):
            left = heat_kernel(basis, s) @ heat_kernel(basis, t)
            assert np.max(np.abs(left - heat_kernel(basis, s + t))) <= 1e-9
    # heat equation, central difference at h = 1e-4
    h, t = 1e-4, 0.8
    derivative = (heat_kernel(basis, t + h) - heat_kernel(basis, t - h)) / (2.0 * h)
    assert np.max(np.abs(derivative + wm.L @ heat_kernel(basis, t))) <= 1e-6
    # resolvent identity
    for gamma in (0.2, 0.6):
        resolvent = pagerank_operator(g, gamma)
        identity = gamma * np.eye(g.n) + (1.0 - gamma) * wm.M @ resolvent
        assert np.max(np.abs(resolvent - identity)) <= 1e-9
    # lazy PageRank relation
    rng = np.random.default_rng(6)
    s = rng.random(g.n)
    s /= s.sum()
    for gamma in (0.15, 0.5, 0.85):
        lazy = lazy_pagerank_vector(g, gamma, s)
        plain = pagerank_vector(g, 2.0 * gamma / (1.0 + gamma), s)
        assert np.max(np.abs(lazy - plain)) <= 1e-10
    # geometric series tail bound
    gamma, horizon = 0.3, 25
    partial = np.zeros(g.n)
    power = s.copy()
    for t_step in range(horizon + 1):
        partial += gamma * (1.0 - gamma) ** t_step * power
        power = wm.M @ power
    tail = np.sum(np.abs(pagerank_vector(g, gamma, s) - partial))
    assert tail <= (1.0 - gamma) ** (horizon + 1) + 1e-15
    _announce(6, "semigroup 1e-9, heat equation 1e-6, resolvent 1e-9, "
                 "lazy relation 1e-10, geometric tail bound")


def test_criterion_7_limit_behavior():
    basis = basis_of(graph_named("P3"))
    concentrated, _ = solve(basis, entropy(), 100.0)
    assert concentrated.weights[0] >= 1.0 - 1e-20
    near_uniform, _ = solve(basis, entropy(), 1e-6)
    assert np.max(np.abs(near_uniform.weights - 0.5)) <= 1e-6
    _, eigvec = spectral_solve(basis)
    samples = sample_vector(concentrated, SampleConfig(seed=77, count=50))
    for sample in samples:
        assert abs(sample @ eigvec) / np.linalg.norm(sample) >= 0.99
    _announce(7, "eta=100 concentrates to 1-1e-20, eta=1e-6 uniform, samples align")


def test_criterion_8_sampling_statistics():
    g = graph_named("K3")
    basis = basis_of(g)
    density = density_from_weights(basis, np.array([0.5, 0.5]))
    samples = sample_vector(density, SampleConfig(seed=2024, count=20_000))
    x = density.dense()
    m = samples.shape[0]
    estimate = empirical_second_moment(samples, ambient_n=g.n)
    std_err = np.sqrt((np.outer(np.diag(x), np.diag(x)) + x**2) / m)
    assert np.all(np.abs(estimate - x) <= 3.0 * std_err)

    lap = build_walk_matrices(g).L
    forms = g.n * np.einsum("ij,jk,ik->i", samples, lap, samples)
    variance = 2.0 * np.trace(lap @ x @ lap @ x)
    assert abs(forms.mean() - float(np.sum(lap * x))) <= 3.0 * math.sqrt(variance / m)
    _announce(8, "second moment and quadratic-form mean within 3 standard errors")


def test_criterion_9_regularizer_calculus():
    rng = np.random.default_rng(14)
    h = 1e-5
    for reg in (entropy(), log_det(), p_norm(2.0), p_norm(1.5), p_norm(3.0)):
        for _ in range(10):
            mu = random_simplex_points(rng, 3, 1)[0] * 0.9 + 0.03
            grad = reg.grad(mu)
            for i in range(3):
                shift = np.zeros(3)
                shift[i] = h
                numeric = (reg.value(mu + shift) - reg.value(mu - shift)) / (2.0 * h)
                assert abs(numeric - grad[i]) <= 1e-5
        points = rng.uniform(0.05, 3.0, size=(100, 5))
        np.testing.assert_allclose(reg.grad_inverse(reg.grad(points)), points, rtol=1e-9)
    _announce(9, "gradients match finite differences 1e-5, round trips 1e-9")


def test_criterion_10_cli_determinism(tmp_path, capsys):
    path = tmp_path / "g8.txt"
    path.write_text(GRAPH_TEXTS["G8"], encoding="utf-8")
    cmd = [
        sys.executable, "-m", "spectralreg.cli", "suite", "--graph", str(path),
    ]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout and len(first.stdout) > 0
    assert json.loads(first.stdout)["all_pass"] is True

    # exit-code matrix: success 0, domain errors 1
    p3 = tmp_path / "p3.txt"
    p3.write_text(GRAPH_TEXTS["P3"], encoding="utf-8")
    ok = cli.main(["solve", "--graph", str(p3), "--regularizer", "entropy", "--eta", "1"])
    assert ok == 0
    for argv in (
        ["solve", "--graph", str(tmp_path / "nope.txt"), "--regularizer", "entropy", "--eta", "1"],
        ["solve", "--graph", str(p3), "--regularizer", "entropy", "--eta", "-2"],
        ["solve", "--graph", str(p3), "--regularizer", "pnorm", "--eta", "1"],
        ["equiv-check", "--graph", str(p3), "--regularizer", "logdet", "--gamma", "2"],
    ):
        assert cli.main(argv) == 1
    capsys.readouterr()
    _announce(10, "byte-identical JSON across runs, correct exit codes")
