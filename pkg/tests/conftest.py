"""Shared graph fixtures for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from spectralreg import build_walk_matrices, decompose, parse_graph

# G8 is a frozen draw of an 8-node random graph with edge probability 1/2;
# minimum degree 4 on 8 nodes guarantees connectivity.
_G8_EDGES = [
    (0, 1), (0, 3), (0, 6), (0, 7), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6),
    (1, 7), (2, 3), (2, 5), (2, 6), (3, 7), (4, 5), (4, 6), (4, 7), (5, 6),
    (5, 7), (6, 7),
]

GRAPH_TEXTS = {
    "K2": "0 1\n",
    "P3": "0 1\n1 2\n",
    "K3": "0 1\n1 2\n0 2\n",
    "C4": "0 1\n1 2\n2 3\n3 0\n",
    "C5": "0 1\n1 2\n2 3\n3 4\n4 0\n",
    "S4": "0 1\n0 2\n0 3\n0 4\n",
    "G8": "".join(f"{u} {v}\n" for u, v in _G8_EDGES),
}

GRAPH_NAMES = tuple(GRAPH_TEXTS)


def graph_named(name: str):
    return parse_graph(GRAPH_TEXTS[name])


def basis_of(g):
    return decompose(build_walk_matrices(g).L, g.degrees)


@pytest.fixture(scope="session")
def graphs():
    return {name: graph_named(name) for name in GRAPH_TEXTS}


@pytest.fixture(scope="session")
def bases(graphs):
    return {name: basis_of(g) for name, g in graphs.items()}


@pytest.fixture()
def p3(graphs):
    return graphs["P3"]


@pytest.fixture()
def k3(graphs):
    return graphs["K3"]


@pytest.fixture()
def k2(graphs):
    return graphs["K2"]


def random_simplex_points(rng: np.random.Generator, dim: int, count: int) -> np.ndarray:
    raw = rng.gamma(1.0, size=(count, dim))
    return raw / raw.sum(axis=1, keepdims=True)
