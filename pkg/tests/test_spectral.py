"""Spectral basis construction, spectral calculus, density matrices."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectralreg import (
    apply_spectral_function,
    build_walk_matrices,
    decompose,
    density_from_weights,
    subspace_trace,
)
from spectralreg.errors import (
    DegenerateTrivialSpaceError,
    NegativeWeightError,
    SingularFunctionValueError,
)

from conftest import GRAPH_NAMES, basis_of, graph_named, random_simplex_points


@pytest.mark.parametrize(
    "name,expected",
    [("K2", [0.0, 2.0]), ("P3", [0.0, 1.0, 2.0]), ("K3", [0.0, 1.5, 1.5])],
)
def test_decompose_spectra(name, expected):
    basis = basis_of(graph_named(name))
    np.testing.assert_allclose(basis.eigenvalues, expected, atol=1e-12)
    assert basis.trivial_index == 0


@pytest.mark.parametrize("name", GRAPH_NAMES)
def test_decompose_invariants(name):
    g = graph_named(name)
    lap = build_walk_matrices(g).L
    basis = decompose(lap, g.degrees)
    recon = (basis.eigenvectors * basis.eigenvalues) @ basis.eigenvectors.T
    assert np.max(np.abs(recon - lap)) < 1e-9
    gram = basis.eigenvectors.T @ basis.eigenvectors
    assert np.max(np.abs(gram - np.eye(g.n))) < 1e-10
    assert abs(basis.eigenvalues[basis.trivial_index]) <= 1e-8
    assert np.all(basis.nontrivial_eigenvalues > 1e-8)
    kernel = np.sqrt(g.degrees)
    kernel /= np.linalg.norm(kernel)
    assert abs(basis.trivial_vector @ kernel) >= 1.0 - 1e-10


@pytest.mark.parametrize("name", GRAPH_NAMES)
def test_decompose_deterministic(name):
    g = graph_named(name)
    lap = build_walk_matrices(g).L
    first = decompose(lap, g.degrees)
    second = decompose(lap.copy(), g.degrees.copy())
    assert np.array_equal(first.eigenvalues, second.eigenvalues)
    assert np.array_equal(first.eigenvectors, second.eigenvectors)


def test_decompose_rejects_degenerate_trivial_space():
    # block-diagonal Laplacian of two disjoint edges has a 2-dim kernel
    lap = np.zeros((4, 4))
    lap[:2, :2] = [[1.0, -1.0], [-1.0, 1.0]]
    lap[2:, 2:] = [[1.0, -1.0], [-1.0, 1.0]]
    with pytest.raises(DegenerateTrivialSpaceError):
        decompose(lap, np.ones(4))


def test_apply_identity_reconstructs_laplacian(p3):
    wm = build_walk_matrices(p3)
    basis = decompose(wm.L, p3.degrees)
    # f(l) = l annihilates the trivial eigenvalue already, so this is all of L
    np.testing.assert_allclose(apply_spectral_function(basis, lambda l: l), wm.L, atol=1e-12)


def test_apply_constant_gives_subspace_projector(k3):
    basis = basis_of(k3)
    projector = apply_spectral_function(basis, lambda l: 1.0)
    np.testing.assert_allclose(projector, basis.projector(), atol=1e-12)
    assert np.trace(projector) == pytest.approx(2.0)


def test_apply_exponential_matches_series(p3):
    # oracle: truncated series sum_{k=0}^{40} (-t)^k L^k / k!, trivial part removed
    basis = basis_of(p3)
    lap = build_walk_matrices(p3).L
    t = 1.0
    series = np.zeros_like(lap)
    term = np.eye(3)
    for k in range(41):
        series += term
        term = term @ lap * (-t) / (k + 1)
    u = basis.trivial_vector
    series -= np.outer(u, u)
    spectral = apply_spectral_function(basis, lambda l: math.exp(-t * l))
    np.testing.assert_allclose(spectral, series, atol=1e-10)
    sub = np.sort(np.linalg.eigvalsh(spectral))
    np.testing.assert_allclose(sub[-2:], sorted([math.exp(-2.0), math.exp(-1.0)]), atol=1e-12)


def test_apply_singular_function_guarded(p3):
    basis = basis_of(p3)
    with pytest.raises(SingularFunctionValueError):
        apply_spectral_function(
            basis, lambda l: 1.0 / (l - 1.0) if l != 1.0 else math.inf
        )


def test_subspace_trace_examples(k3, p3):
    basis3 = basis_of(k3)
    assert subspace_trace(np.eye(3), basis3) == pytest.approx(2.0)
    basis_p3 = basis_of(p3)
    lap = build_walk_matrices(p3).L
    assert subspace_trace(lap, basis_p3) == pytest.approx(3.0, abs=1e-10)
    u = basis3.trivial_vector
    assert subspace_trace(np.outer(u, u), basis3) == pytest.approx(0.0, abs=1e-12)


def test_uniform_density_on_k3_is_half_projector(k3):
    basis = basis_of(k3)
    density = density_from_weights(basis, np.array([0.5, 0.5]))
    np.testing.assert_allclose(density.dense(), 0.5 * basis.projector(), atol=1e-12)


def test_one_hot_density_is_rank_one_projector(p3):
    basis = basis_of(p3)
    density = density_from_weights(basis, np.array([1.0, 0.0]))
    v = basis.eigenvectors[:, 1]
    np.testing.assert_allclose(density.dense(), np.outer(v, v), atol=1e-12)
    # the square root of a rank-1 projector is itself
    np.testing.assert_allclose(density.sqrt(), density.dense(), atol=1e-12)


def test_density_sqrt_squares_back(p3):
    basis = basis_of(p3)
    density = density_from_weights(basis, np.array([0.3, 0.7]))
    root = density.sqrt()
    np.testing.assert_allclose(root @ root, density.dense(), atol=1e-10)


def test_density_lives_in_subspace(p3):
    basis = basis_of(p3)
    density = density_from_weights(basis, np.array([0.25, 0.75]))
    u = np.sqrt(p3.degrees)
    u /= np.linalg.norm(u)
    assert abs(u @ density.dense() @ u) <= 1e-10


def test_density_weight_validation(p3):
    basis = basis_of(p3)
    with pytest.raises(NegativeWeightError):
        density_from_weights(basis, np.array([1.1, -0.1]))
    with pytest.raises(NegativeWeightError):
        density_from_weights(basis, np.array([0.6, 0.6]))
    # near-miss sums are renormalized to exactly one
    density = density_from_weights(basis, np.array([0.5, 0.5 + 5e-9]))
    assert density.weights.sum() == pytest.approx(1.0, abs=1e-15)


def test_density_json_dict(p3):
    basis = basis_of(p3)
    density = density_from_weights(basis, np.array([0.6, 0.4]))
    doc = density.to_json_dict(include_dense=True)
    assert set(doc) == {"weights", "eigenvalues", "dense"}
    assert doc["weights"] == pytest.approx([0.6, 0.4])
    assert len(doc["dense"]) == 3


def test_spectral_function_composition(p3):
    basis = basis_of(p3)
    f = lambda l: math.exp(-0.3 * l)  # noqa: E731
    h = lambda l: 1.0 / (1.0 + l)  # noqa: E731
    composed = apply_spectral_function(basis, f) @ apply_spectral_function(basis, h)
    product = apply_spectral_function(basis, lambda l: f(l) * h(l))
    np.testing.assert_allclose(composed, product, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(
    name=st.sampled_from(GRAPH_NAMES),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_objective_consistency_between_coordinates(name, seed):
    # dense trace inner product agrees with the weight representation
    g = graph_named(name)
    basis = basis_of(g)
    rng = np.random.default_rng(seed)
    weights = random_simplex_points(rng, g.n - 1, 1)[0]
    density = density_from_weights(basis, weights)
    lap = build_walk_matrices(g).L
    dense_objective = float(np.sum(lap * density.dense()))
    assert dense_objective == pytest.approx(density.objective(), abs=1e-10)
