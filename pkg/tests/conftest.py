"""Shared fixtures: worked-example goldens, random-instance generators,
and independent oracles (absorbing-chain probabilities, masked truncated
reductions) used to cross-check the library's computation paths.
"""

from __future__ import annotations

import numpy as np
import pytest

from etlink.graph import Graph, build_graph

# ---------------------------------------------------------------------------
# The four-node worked example: a strongly connected digraph on labels
# 1..4 whose row-normalized transition matrix has closed-form effective
# transitions.  All expected values below are exact rationals / algebraic
# numbers checked by hand.

FOUR_NODE_EDGES = [(1, 2), (1, 3), (1, 4), (2, 3), (3, 4), (4, 1), (4, 2)]

FOUR_NODE_P = np.array(
    [
        [0, 1 / 3, 1 / 3, 1 / 3],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1 / 2, 1 / 2, 0, 0],
    ]
)

FOUR_NODE_A = np.array(
    [
        [0.0, 1, 1, 1],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 1, 0, 0],
    ]
)

# Effective transition matrix of FOUR_NODE_P.
FOUR_NODE_E_P = np.array(
    [
        [1 / 2, 2 / 3, 5 / 6, 1],
        [1 / 2, 1 / 2, 1, 1],
        [1 / 2, 4 / 5, 7 / 10, 1],
        [1 / 2, 2 / 3, 5 / 6, 1],
    ]
)

# The six pairwise reductions of FOUR_NODE_P, keyed by internal (i, j), i < j.
FOUR_NODE_PAIR_REDUCTIONS = {
    (0, 1): np.array([[1 / 3, 2 / 3], [1 / 2, 1 / 2]]),
    (0, 2): np.array([[1 / 6, 5 / 6], [1 / 2, 1 / 2]]),
    (0, 3): np.array([[0, 1], [1 / 2, 1 / 2]]),
    (1, 2): np.array([[0, 1], [4 / 5, 1 / 5]]),
    (1, 3): np.array([[0, 1], [2 / 3, 1 / 3]]),
    (2, 3): np.array([[0, 1], [5 / 6, 1 / 6]]),
}

_SQRT5 = np.sqrt(5.0)
GOLDEN = (1 + _SQRT5) / 2

# Effective transition matrix of FOUR_NODE_A (entries in the golden ratio).
FOUR_NODE_E_A = np.array(
    [
        [GOLDEN, 2, 2, 2],
        [(3 - _SQRT5) / 2, (3 - _SQRT5) / 2, 1, (-1 + _SQRT5) / 2],
        [(-1 + _SQRT5) / 2, GOLDEN, 1, 1],
        [1, GOLDEN, GOLDEN, 2],
    ]
)


@pytest.fixture
def four_node_graph() -> Graph:
    return build_graph(FOUR_NODE_EDGES, directed=True)


def make_four_node_graph() -> Graph:
    return build_graph(FOUR_NODE_EDGES, directed=True)


# ---------------------------------------------------------------------------
# Random instance generators.  All take an explicit numpy Generator so the
# suites stay reproducible.


def random_strongly_connected_digraph(rng, n: int, extra_edges: int) -> Graph:
    """Random digraph guaranteed strongly connected: a directed cycle over
    a random permutation plus ``extra_edges`` random non-loop edges."""
    perm = rng.permutation(n)
    edges = {(int(perm[t]), int(perm[(t + 1) % n])) for t in range(n)}
    target = min(len(edges) + extra_edges, n * (n - 1))
    while len(edges) < target:
        i = int(rng.integers(n))
        j = int(rng.integers(n))
        if i != j:
            edges.add((i, j))
    return build_graph(sorted(edges), directed=True, nodes=range(n))


def random_connected_undirected_graph(rng, n: int, extra_edges: int) -> Graph:
    """Random connected undirected graph: a random spanning tree plus
    ``extra_edges`` random extra edges."""
    order = rng.permutation(n)
    edges = set()
    for t in range(1, n):
        parent = int(order[int(rng.integers(t))])
        edges.add(tuple(sorted((parent, int(order[t])))))
    while len(edges) < min(n - 1 + extra_edges, n * (n - 1) // 2):
        i = int(rng.integers(n))
        j = int(rng.integers(n))
        if i != j:
            edges.add(tuple(sorted((i, j))))
    return build_graph(sorted(edges), directed=False, nodes=range(n))


def random_irreducible_matrix(rng, n: int, extra_edges=None) -> np.ndarray:
    """Nonnegative irreducible matrix: random positive weights on the edge
    pattern of a random strongly connected digraph."""
    if extra_edges is None:
        extra_edges = max(n, int(0.3 * n * n))
    g = random_strongly_connected_digraph(rng, n, extra_edges)
    M = np.zeros((n, n))
    M[g.src, g.dst] = rng.uniform(0.2, 1.0, size=g.m)
    return M


def random_stochastic_matrix(rng, n: int, extra_edges=None) -> np.ndarray:
    M = random_irreducible_matrix(rng, n, extra_edges)
    return M / M.sum(axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# Independent oracles.


def hit_before_return_probability(P: np.ndarray, i: int, j: int) -> float:
    """Probability that the Markov chain with row-stochastic P, started at
    i, reaches j before returning to i.

    First-step analysis with i and j absorbing: for k outside {i, j},
    h_k solves h = P h with h_i = 0, h_j = 1; the answer conditions on the
    first step out of i.  This never touches the reduction machinery.
    """
    n = P.shape[0]
    others = [k for k in range(n) if k != i and k != j]
    if others:
        A = np.eye(len(others)) - P[np.ix_(others, others)]
        b = P[np.ix_(others, [j])].ravel()
        h = np.linalg.solve(A, b)
    else:
        h = np.zeros(0)
    full = np.zeros(n)
    full[j] = 1.0
    full[others] = h
    return float(P[i] @ full)


def masked_truncated_reduction(
    M: np.ndarray, members, i: int, j: int, ell: int, rho: float
) -> np.ndarray:
    """Truncated pair reduction computed the expensive way: zero the matrix
    outside ``members`` and run the k = 0..ell power sum over the *full*
    complement of {i, j}, with explicit matrix powers.

    Nodes outside the member set carry zero rows/columns, so this equals
    the pruned computation if and only if the pruning bookkeeping is right.
    """
    n = M.shape[0]
    keep = sorted(members)
    P = np.zeros_like(M)
    P[np.ix_(keep, keep)] = M[np.ix_(keep, keep)]
    S = [i, j]
    comp = [k for k in range(n) if k not in S]
    rinv = 1.0 / rho
    if not comp:
        return P[np.ix_(S, S)].copy()
    C = rinv * P[np.ix_(comp, comp)]
    acc = np.zeros_like(C)
    power = np.eye(len(comp))
    for _ in range(ell + 1):
        acc += power
        power = power @ C
    return P[np.ix_(S, S)] + rinv * (P[np.ix_(S, comp)] @ acc @ P[np.ix_(comp, S)])


def truncated_reduction_full_complement(
    M: np.ndarray, i: int, j: int, ell: int, rho: float
) -> np.ndarray:
    """Same truncated power sum with no masking at all (every node kept)."""
    return masked_truncated_reduction(M, range(M.shape[0]), i, j, ell, rho)


def expected_hitting_times(P: np.ndarray) -> np.ndarray:
    """Dense mean hitting times via per-target linear systems (written
    independently of the library's solver for cross-checking)."""
    n = P.shape[0]
    H = np.zeros((n, n))
    for j in range(n):
        rest = [k for k in range(n) if k != j]
        A = np.eye(n - 1) - P[np.ix_(rest, rest)]
        H[rest, j] = np.linalg.solve(A, np.ones(n - 1))
    return H
