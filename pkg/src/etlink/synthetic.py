"""Deterministic synthetic graph generators for benchmarks and tests."""

from __future__ import annotations

from typing import List, Tuple

import numpy as np


def preferential_attachment_edges(
    n: int, edges_per_node: int, seed: int = 0
) -> List[Tuple[int, int]]:
    """Undirected preferential-attachment edge list in growth order.

    Starts from a clique on ``edges_per_node + 1`` nodes; every later node
    attaches to ``edges_per_node`` distinct existing nodes sampled with
    probability proportional to current degree.  Edge order doubles as the
    temporal order, so early edges form the dense core.
    """
    if edges_per_node < 1 or n <= edges_per_node:
        raise ValueError("need n > edges_per_node >= 1")
    rng = np.random.default_rng(seed)
    edges: List[Tuple[int, int]] = []
    repeated: List[int] = []
    k = edges_per_node
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            edges.append((i, j))
            repeated += [i, j]
    for v in range(k + 1, n):
        targets = set()
        while len(targets) < k:
            targets.add(repeated[int(rng.integers(len(repeated)))])
        for t in sorted(targets):
            edges.append((v, t))
            repeated += [v, t]
    return edges


def write_edge_list(edges, path) -> None:
    """Write (src, dst) pairs as whitespace-delimited lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for a, b in edges:
            fh.write(f"{a} {b}\n")
