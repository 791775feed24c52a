"""Graph representation, connectivity analysis, BFS distances, and the
transition matrices derived from a graph.

Graphs are immutable after construction. Nodes are relabeled to dense
0-based ids internally; the original labels are retained so that results
can be reported in the caller's vocabulary.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import ConfigError

# Sentinel for unreachable pairs in distance matrices.  Large enough to
# dominate any hop count, small enough that sums of two never overflow int64.
UNREACHABLE = np.int64(2**31)


class Connectivity(enum.Enum):
    CONNECTED = "connected"
    STRONGLY_CONNECTED = "strongly_connected"
    WEAKLY_CONNECTED = "weakly_connected"
    DISCONNECTED = "disconnected"


class MatrixVariant(enum.Enum):
    STANDARD = "standard"
    NORMALIZED = "normalized"
    WEIGHTED = "weighted"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Graph:
    """An immutable directed or undirected graph with dense 0-based node ids.

    Undirected edges are stored once with src <= dst and exposed
    symmetrically by the matrix builders.  ``labels[i]`` is the original
    label of internal node ``i``.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    timestamp: Optional[np.ndarray]
    directed: bool
    weighted: bool
    labels: tuple
    has_self_loops: bool = False
    _edge_set: frozenset = field(default=None, repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.src)

    def edge_set(self) -> frozenset:
        """Set of stored (src, dst) id pairs (canonical for undirected)."""
        if self._edge_set is None:
            pairs = frozenset(zip(self.src.tolist(), self.dst.tolist()))
            object.__setattr__(self, "_edge_set", pairs)
        return self._edge_set

    def has_edge(self, i: int, j: int) -> bool:
        if not self.directed and i > j:
            i, j = j, i
        return (i, j) in self.edge_set()

    def label_of(self, i: int) -> Hashable:
        return self.labels[i]

    def id_of(self, label: Hashable) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class TransitionMatrix:
    """A nonnegative square matrix whose positive entries are exactly the
    graph's edges, tagged with the derivation variant."""

    entries: np.ndarray
    variant: MatrixVariant
    graph: Graph

    def __post_init__(self):
        g = self.graph
        M = self.entries
        if M.shape != (g.n, g.n):
            raise ConfigError(f"matrix shape {M.shape} does not match n={g.n}")
        pattern = M > 0
        expected = np.zeros((g.n, g.n), dtype=bool)
        expected[g.src, g.dst] = True
        if not g.directed:
            expected[g.dst, g.src] = True
        if np.any(M < 0):
            raise ConfigError("transition matrix entries must be nonnegative")
        if not np.array_equal(pattern, expected):
            raise ConfigError(
                "positive entries of the transition matrix must coincide "
                "with the graph's edge set"
            )
        if self.variant is MatrixVariant.NORMALIZED:
            sums = M.sum(axis=1)
            if np.max(np.abs(sums - 1.0)) > 1e-12:
                raise ConfigError("normalized variant requires row sums of 1")

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class DistanceMatrix:
    """Hop distances delta[i, j]; unreachable pairs hold ``UNREACHABLE``."""

    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def build_graph(
    edges: Iterable[tuple],
    directed: bool,
    weighted: bool = False,
    nodes: Optional[Iterable[Hashable]] = None,
    sort_labels: bool = False,
) -> Graph:
    """Construct a Graph from an edge list of (src, dst[, weight[, timestamp]]).

    Node labels may be arbitrary hashable values; they are relabeled to
    0..n-1 in order of first appearance (or in sorted order when
    ``sort_labels`` is set).  Duplicate (src, dst) pairs collapse to the
    first occurrence's weight and the earliest timestamp seen.  Undirected
    edges are canonicalized to src <= dst in internal ids.  Self loops are
    accepted and flagged.

    ``nodes`` optionally registers labels (e.g. isolated nodes) ahead of
    the edge endpoints.
    """
    index: dict = {}
    labels: list = []

    def intern(label) -> int:
        i = index.get(label)
        if i is None:
            i = len(labels)
            index[label] = i
            labels.append(label)
        return i

    raw = []
    for e in edges:
        if len(e) == 2:
            a, b = e
            w, ts = 1.0, None
        elif len(e) == 3:
            a, b, w = e
            ts = None
        elif len(e) == 4:
            a, b, w, ts = e
        else:
            raise ConfigError(f"edge tuple of length {len(e)} not understood: {e!r}")
        raw.append((a, b, w, ts))

    if sort_labels:
        seen = set()
        ordered = []
        if nodes is not None:
            for lab in nodes:
                if lab not in seen:
                    seen.add(lab)
                    ordered.append(lab)
        for a, b, _, _ in raw:
            for lab in (a, b):
                if lab not in seen:
                    seen.add(lab)
                    ordered.append(lab)
        for lab in sorted(ordered):
            intern(lab)
    elif nodes is not None:
        for lab in nodes:
            intern(lab)

    stored: dict = {}
    order: list = []
    has_loops = False
    for a, b, w, ts in raw:
        i, j = intern(a), intern(b)
        if weighted:
            w = float(w)
            if w == 0.0:
                raise ConfigError(f"edge ({a!r}, {b!r}) has zero weight")
        else:
            w = 1.0
        if not directed and i > j:
            i, j = j, i
        if i == j:
            has_loops = True
        key = (i, j)
        if key in stored:
            w0, ts0 = stored[key]
            if ts is not None and (ts0 is None or ts < ts0):
                ts0 = ts
            stored[key] = (w0, ts0)
        else:
            stored[key] = (w, ts)
            order.append(key)

    n = len(labels)
    src = np.array([k[0] for k in order], dtype=np.int64)
    dst = np.array([k[1] for k in order], dtype=np.int64)
    wts = np.array([stored[k][0] for k in order], dtype=np.float64)
    ts_vals = [stored[k][1] for k in order]
    if any(t is not None for t in ts_vals):
        timestamps = np.array(
            [t if t is not None else 0 for t in ts_vals], dtype=np.int64
        )
    else:
        timestamps = None
    return Graph(
        n=n,
        src=src,
        dst=dst,
        weight=wts,
        timestamp=timestamps,
        directed=directed,
        weighted=weighted,
        labels=tuple(labels),
        has_self_loops=has_loops,
    )


def _dense_pattern(g: Graph) -> np.ndarray:
    A = np.zeros((g.n, g.n))
    A[g.src, g.dst] = 1.0
    if not g.directed:
        A[g.dst, g.src] = 1.0
    return A


def adjacency_matrix(g: Graph) -> TransitionMatrix:
    """0/1 adjacency matrix; symmetric for undirected graphs."""
    return TransitionMatrix(_dense_pattern(g), MatrixVariant.STANDARD, g)


def normalized_matrix(g: Graph) -> TransitionMatrix:
    """Row-stochastic matrix: row i of the adjacency divided by node i's
    out-degree.  Every node must have out-degree >= 1."""
    A = _dense_pattern(g)
    deg = A.sum(axis=1)
    dead = np.flatnonzero(deg == 0)
    if dead.size:
        raise ConfigError(
            f"node {g.labels[dead[0]]!r} has out-degree 0; "
            "row normalization is undefined"
        )
    return TransitionMatrix(A / deg[:, None], MatrixVariant.NORMALIZED, g)


def weighted_matrix(g: Graph) -> TransitionMatrix:
    """Weighted adjacency matrix w[i, j] = weight of edge (i, j)."""
    if not g.weighted:
        raise ConfigError("weighted_matrix requires a graph built with weighted=True")
    if np.any(g.weight < 0):
        raise ConfigError("negative edge weights are not supported")
    W = np.zeros((g.n, g.n))
    W[g.src, g.dst] = g.weight
    if not g.directed:
        W[g.dst, g.src] = g.weight
    return TransitionMatrix(W, MatrixVariant.WEIGHTED, g)


def custom_matrix(entries: np.ndarray, directed: bool = True) -> TransitionMatrix:
    """Wrap a user-supplied nonnegative matrix, deriving its graph from the
    sparsity pattern (labels are 0..n-1)."""
    entries = np.asarray(entries, dtype=np.float64)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ConfigError("custom transition matrix must be square")
    if np.any(entries < 0):
        raise ConfigError("transition matrix entries must be nonnegative")
    ii, jj = np.nonzero(entries)
    pairs = zip(ii.tolist(), jj.tolist())
    if not directed:
        pairs = ((i, j) for i, j in pairs if i <= j)
        if not np.allclose(entries, entries.T):
            raise ConfigError("undirected custom matrix must be symmetric")
    g = build_graph(
        [(i, j) for i, j in pairs], directed=directed, nodes=range(entries.shape[0])
    )
    return TransitionMatrix(entries, MatrixVariant.CUSTOM, g)


def _sparse_adjacency(g: Graph) -> csr_matrix:
    data = np.ones(len(g.src))
    A = csr_matrix((data, (g.src, g.dst)), shape=(g.n, g.n))
    if not g.directed:
        A = A + csr_matrix((data, (g.dst, g.src)), shape=(g.n, g.n))
    return A


def connectivity(g: Graph) -> Connectivity:
    """Classify per the usual definitions: undirected graphs are connected
    or disconnected; directed graphs are strongly connected, weakly
    connected, or disconnected."""
    if g.n == 0:
        return Connectivity.DISCONNECTED
    if g.n == 1:
        return (
            Connectivity.STRONGLY_CONNECTED if g.directed else Connectivity.CONNECTED
        )
    A = _sparse_adjacency(g)
    if not g.directed:
        k, _ = connected_components(A, directed=False)
        return Connectivity.CONNECTED if k == 1 else Connectivity.DISCONNECTED
    k, _ = connected_components(A, directed=True, connection="strong")
    if k == 1:
        return Connectivity.STRONGLY_CONNECTED
    k, _ = connected_components(A, directed=True, connection="weak")
    if k == 1:
        return Connectivity.WEAKLY_CONNECTED
    return Connectivity.DISCONNECTED


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest connected (undirected) or strongly
    connected (directed) component.  Size ties are broken toward the
    component containing the smallest original label."""
    if g.n == 0:
        return g
    A = _sparse_adjacency(g)
    if g.directed:
        k, comp = connected_components(A, directed=True, connection="strong")
    else:
        k, comp = connected_components(A, directed=False)
    if k == 1:
        return g
    sizes = np.bincount(comp, minlength=k)
    best = None
    for c in range(k):
        min_label = min(g.labels[i] for i in np.flatnonzero(comp == c))
        key = (-sizes[c], min_label)
        if best is None or key < best[0]:
            best = (key, c)
    chosen = best[1]
    members = comp == chosen
    kept = [
        t
        for t in range(g.m)
        if members[g.src[t]] and members[g.dst[t]]
    ]
    member_labels = [g.labels[i] for i in np.flatnonzero(members)]
    edges = []
    for t in kept:
        ts = None if g.timestamp is None else int(g.timestamp[t])
        edges.append((g.labels[g.src[t]], g.labels[g.dst[t]], g.weight[t], ts))
    return build_graph(
        edges, directed=g.directed, weighted=g.weighted, nodes=member_labels
    )


def bfs_distances(g: Graph) -> DistanceMatrix:
    """All-pairs hop distances (edge weights ignored).  Unreachable pairs
    are set to ``UNREACHABLE``."""
    if g.n == 0:
        return DistanceMatrix(np.zeros((0, 0), dtype=np.int64))
    D = shortest_path(_sparse_adjacency(g), method="D", unweighted=True)
    out = np.full(D.shape, UNREACHABLE, dtype=np.int64)
    reachable = np.isfinite(D)
    out[reachable] = D[reachable].astype(np.int64)
    return DistanceMatrix(out)


def neighborhood_within(g: Graph, i: int, ell: int) -> set:
    """Nodes reachable from i in at most ell hops, including i itself."""
    if ell < 1:
        raise ConfigError("ell must be >= 1")
    adj: list = [[] for _ in range(g.n)]
    for a, b in zip(g.src.tolist(), g.dst.tolist()):
        adj[a].append(b)
        if not g.directed:
            adj[b].append(a)
    seen = {i}
    frontier = [i]
    for _ in range(ell):
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    return seen
