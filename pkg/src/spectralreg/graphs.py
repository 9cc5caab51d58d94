"""Weighted undirected graphs and their walk matrices.

Edge-list file format: one edge per line as ``u v w`` (or ``u v`` with weight
defaulting to 1.0), whitespace separated, UTF-8, with ``#`` starting a comment
that runs to end of line. Node ids are dense non-negative integers; the node
count is ``max id + 1``. Self-loops are rejected, duplicate edges are summed
with a warning, and the graph must be connected.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlphaOutOfRangeError,
    DisconnectedGraphError,
    InternalCheckError,
    NonPositiveWeightError,
    ParseError,
    SelfLoopError,
)


@dataclass(frozen=True, eq=False)
class Graph:
    """Connected weighted undirected graph with strictly positive degrees.

    ``edges`` stores each unordered pair once as ``(u, v, w)`` with ``u < v``.
    Instances are immutable after construction and safe to share across threads.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    degrees: np.ndarray = field(repr=False)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v, w in self.edges:
            a[u, v] = w
            a[v, u] = w
        return a


def _build_graph(n: int, weights: dict[tuple[int, int], float]) -> Graph:
    if n < 1:
        raise ParseError(0, "graph has no nodes")
    # accumulate degrees in sorted edge order so equal graphs get bit-identical
    # degrees regardless of input line order
    edges = tuple(sorted((u, v, w) for (u, v), w in weights.items()))
    adjacency_lists: list[list[int]] = [[] for _ in range(n)]
    degrees = np.zeros(n)
    for u, v, w in edges:
        degrees[u] += w
        degrees[v] += w
        adjacency_lists[u].append(v)
        adjacency_lists[v].append(u)

    isolated = [i for i in range(n) if not adjacency_lists[i]]
    if isolated:
        raise DisconnectedGraphError(
            f"nodes without edges (id gaps count as nodes): {isolated[:10]}"
        )
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for v in adjacency_lists[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    if not seen.all():
        raise DisconnectedGraphError(
            f"graph has more than one component; unreachable from node 0: "
            f"{np.flatnonzero(~seen)[:10].tolist()}"
        )

    degrees.setflags(write=False)
    return Graph(n=n, edges=edges, degrees=degrees)


def _check_edge(u: int, v: int, w: float) -> tuple[int, int]:
    if u == v:
        raise SelfLoopError(f"self-loop at node {u}")
    if not (w > 0.0) or not np.isfinite(w):
        raise NonPositiveWeightError(f"edge ({u}, {v}) has non-positive weight {w}")
    return (u, v) if u < v else (v, u)


def parse_graph(text: str) -> Graph:
    """Parse edge-list text into a validated :class:`Graph`."""
    weights: dict[tuple[int, int], float] = {}
    max_id = -1
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(line_number, f"expected 'u v' or 'u v w', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(line_number, f"node ids must be integers, got {raw!r}") from None
        if u < 0 or v < 0:
            raise ParseError(line_number, f"node ids must be non-negative, got {raw!r}")
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(line_number, f"weight must be a real number, got {raw!r}") from None
        else:
            w = 1.0
        key = _check_edge(u, v, w)
        if key in weights:
            warnings.warn(
                f"duplicate edge {key} on line {line_number}; weights summed",
                stacklevel=2,
            )
            weights[key] += w
        else:
            weights[key] = w
        max_id = max(max_id, u, v)
    if max_id < 0:
        raise ParseError(0, "no edges found")
    return _build_graph(max_id + 1, weights)


def graph_to_text(g: Graph) -> str:
    """Serialize to the edge-list format; round-trips through :func:`parse_graph`."""
    lines = [f"{u} {v} {w!r}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def graph_from_adjacency(a: np.ndarray) -> Graph:
    """Build a :class:`Graph` from a dense symmetric adjacency matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParseError(0, f"adjacency must be square, got shape {a.shape}")
    if not np.allclose(a, a.T, atol=1e-12):
        raise ParseError(0, "adjacency must be symmetric")
    weights: dict[tuple[int, int], float] = {}
    n = a.shape[0]
    if np.any(np.diag(a) != 0.0):
        raise SelfLoopError("adjacency has a nonzero diagonal entry")
    for u in range(n):
        for v in range(u + 1, n):
            if a[u, v] != 0.0:
                weights[_check_edge(u, v, float(a[u, v]))] = float(a[u, v])
    return _build_graph(n, weights)


@dataclass(frozen=True, eq=False)
class WalkMatrices:
    """Dense walk matrices of a graph.

    ``M`` is the column-stochastic natural walk matrix A D^-1,
    ``normalized_adjacency`` is D^-1/2 A D^-1/2, and ``L`` is the normalized
    Laplacian I - D^-1/2 A D^-1/2.
    """

    M: np.ndarray
    normalized_adjacency: np.ndarray
    L: np.ndarray


def build_walk_matrices(g: Graph) -> WalkMatrices:
    a = g.adjacency()
    inv_d = 1.0 / g.degrees
    inv_sqrt_d = np.sqrt(inv_d)
    m = a * inv_d[np.newaxis, :]
    norm_adj = a * inv_sqrt_d[:, np.newaxis] * inv_sqrt_d[np.newaxis, :]
    lap = np.eye(g.n) - norm_adj

    col_sums = m.sum(axis=0)
    if np.max(np.abs(col_sums - 1.0)) > 1e-12:
        raise InternalCheckError("walk matrix columns do not sum to 1")
    if np.max(np.abs(lap - lap.T)) > 1e-12:
        raise InternalCheckError("normalized Laplacian is not symmetric")
    kernel_vec = np.sqrt(g.degrees)
    if np.max(np.abs(lap @ kernel_vec)) > 1e-10:
        raise InternalCheckError("normalized Laplacian does not annihilate D^1/2 1")
    eigenvalues = np.linalg.eigvalsh(lap)
    if eigenvalues[0] < -1e-10 or eigenvalues[-1] > 2.0 + 1e-10:
        raise InternalCheckError(f"Laplacian spectrum outside [0, 2]: {eigenvalues}")

    for arr in (m, norm_adj, lap):
        arr.setflags(write=False)
    return WalkMatrices(M=m, normalized_adjacency=norm_adj, L=lap)


def lazy_walk(g: Graph, alpha: float) -> np.ndarray:
    """One step of the alpha-lazy walk: alpha I + (1 - alpha) A D^-1."""
    if not (0.0 <= alpha <= 1.0):
        raise AlphaOutOfRangeError(f"laziness must be in [0, 1], got {alpha}")
    m = build_walk_matrices(g).M
    return alpha * np.eye(g.n) + (1.0 - alpha) * m
