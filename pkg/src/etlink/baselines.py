"""Standard link predictors sharing the ScoreTable interface.

All scores are oriented so that higher means "more likely link";
distance-like metrics (shortest path, hitting time, resistance distance)
are negated.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import ConfigError
from .graph import (
    Connectivity,
    Graph,
    UNREACHABLE,
    adjacency_matrix,
    bfs_distances,
    connectivity,
    normalized_matrix,
)
from .scores import ScoreTable
from .spectral import spectral_data


def _require_connected(g: Graph, predictor: str) -> None:
    conn = connectivity(g)
    ok = (
        conn is Connectivity.STRONGLY_CONNECTED
        if g.directed
        else conn is Connectivity.CONNECTED
    )
    if not ok:
        raise ConfigError(f"{predictor} requires a (strongly) connected graph")


def _require_undirected(g: Graph, predictor: str) -> None:
    if g.directed:
        raise ConfigError(f"{predictor} is defined for undirected graphs only")


def _symmetric_adjacency(g: Graph) -> np.ndarray:
    # Neighbor sets never contain the node itself, so drop loops here.
    A = adjacency_matrix(g).entries.copy()
    np.fill_diagonal(A, 0.0)
    return A


def shortest_path_score(g: Graph) -> ScoreTable:
    """score(i, j) = negated hop distance from i to j."""
    _require_connected(g, "shortest-path")
    d = bfs_distances(g).entries
    if np.any(d >= UNREACHABLE):
        raise ConfigError("shortest-path scores undefined for unreachable pairs")
    return ScoreTable(-d.astype(np.float64), "shortest-path", labels=g.labels)


def katz_score(g: Graph, beta: Optional[float] = None) -> ScoreTable:
    """Walk-count score sum_l beta^l (A^l)[i, j], evaluated in closed form
    as (I - beta A)^-1 - I.

    Requires 0 < beta < 1 and beta < 1/rho(A) for the series to converge.
    Defaults to half the convergence radius (an adjacency matrix has
    rho = 0 or rho >= 1, so the default always lands below 1).
    """
    A = adjacency_matrix(g).entries
    rho = spectral_data(A).rho
    limit = 1.0 / rho if rho > 0 else np.inf
    if beta is None:
        beta = 0.5 * limit if np.isfinite(limit) else 0.5
    if not (0.0 < beta < 1.0) or beta >= limit:
        raise ConfigError(
            f"katz beta must lie in (0, 1) and below 1/rho(A) = {limit:.6g}; "
            f"got {beta}"
        )
    n = g.n
    K = np.linalg.solve(np.eye(n) - beta * A, np.eye(n)) - np.eye(n)
    return ScoreTable(K, "katz", labels=g.labels)


def hitting_time_score(g: Graph) -> ScoreTable:
    """score(i, j) = -H[i, j] where H is the expected number of random-walk
    steps from i to j, solved per target j by first-step analysis:
    h_i = 1 + sum_{k != j} P[i, k] h_k with h_j = 0."""
    _require_connected(g, "hitting-time")
    P = normalized_matrix(g).entries
    n = g.n
    H = np.zeros((n, n))
    base = np.arange(n)
    for j in range(n):
        rest = base[base != j]
        A = np.eye(n - 1) - P[np.ix_(rest, rest)]
        h = np.linalg.solve(A, np.ones(n - 1))
        H[rest, j] = h
    return ScoreTable(-H, "hitting-time", labels=g.labels)


def common_neighbors_score(g: Graph) -> ScoreTable:
    """score(i, j) = number of shared neighbors."""
    _require_undirected(g, "common-neighbors")
    A = _symmetric_adjacency(g)
    counts = np.rint(A @ A)
    return ScoreTable(counts, "common-neighbors", labels=g.labels)


def jaccard_score(g: Graph) -> ScoreTable:
    """Common neighbors normalized by the neighborhood union; pairs with an
    empty union score 0."""
    _require_undirected(g, "jaccard")
    A = _symmetric_adjacency(g)
    inter = np.rint(A @ A)
    deg = A.sum(axis=1)
    union = deg[:, None] + deg[None, :] - inter
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(union > 0, inter / np.maximum(union, 1.0), 0.0)
    return ScoreTable(out, "jaccard", labels=g.labels)


def preferential_attachment_score(g: Graph) -> ScoreTable:
    """score(i, j) = degree(i) * degree(j)."""
    _require_undirected(g, "preferential-attachment")
    deg = _symmetric_adjacency(g).sum(axis=1)
    return ScoreTable(np.outer(deg, deg), "preferential-attachment", labels=g.labels)


def resistance_distance_score(g: Graph) -> ScoreTable:
    """score(i, j) = negated effective resistance between i and j.

    The Laplacian pseudoinverse is obtained from the rank-one shift
    (L + J/n)^-1 - J/n, valid on connected graphs.  Smaller resistance
    ranks higher, hence the negation.
    """
    _require_undirected(g, "resistance-distance")
    _require_connected(g, "resistance-distance")
    A = _symmetric_adjacency(g)
    n = g.n
    L = np.diag(A.sum(axis=1)) - A
    J = np.full((n, n), 1.0 / n)
    Lp = np.linalg.inv(L + J) - J
    diag = np.diag(Lp)
    resistance = diag[:, None] + diag[None, :] - 2.0 * Lp
    return ScoreTable(-resistance, "resistance-distance", labels=g.labels)
