"""Effective transition matrices.

The effective transition epsilon[i, j] of a transition matrix M is read
off the 2x2 isoradial reduction of M onto {i, j}: for a row-stochastic M
it is the probability that a random walk started at i reaches j before
returning to i.  The exact form computes one reduction per node pair; the
l-step form truncates each reduction's walk expansion after l terms and
confines it to the nodes lying on short walks between the pair, which is
what makes it tractable on large networks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numba as nb
import numpy as np

from .errors import ConfigError, NumericalError
from .graph import (
    Connectivity,
    DistanceMatrix,
    MatrixVariant,
    TransitionMatrix,
    bfs_distances,
    connectivity,
)
from .scores import ScoreTable
from .spectral import (
    DEFAULT_NUMERICS,
    NumericsConfig,
    SpectralData,
    isoradial_reduction,
    spectral_data,
)

MODE_EXACT = "exact"
MODE_LSTEP = "lstep"


@dataclass(frozen=True)
class EffectiveTransitionMatrix:
    """Matrix of effective transition scores plus provenance."""

    entries: np.ndarray
    mode: str
    ell: Optional[int]
    source_variant: MatrixVariant
    source_rho: float
    source_stochastic: bool
    labels: tuple

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class GammaSet:
    """Nodes lying on walks of length <= ell between i and j (both
    directions), plus i and j themselves."""

    i: int
    j: int
    ell: int
    members: frozenset


def _is_stochastic(M: np.ndarray) -> bool:
    return bool(np.max(np.abs(M.sum(axis=1) - 1.0)) <= 1e-12)


def _require_connected(tm: TransitionMatrix) -> None:
    conn = connectivity(tm.graph)
    ok = (
        conn is Connectivity.STRONGLY_CONNECTED
        if tm.graph.directed
        else conn is Connectivity.CONNECTED
    )
    if not ok:
        raise ConfigError(
            f"exact effective transitions require a (strongly) connected "
            f"graph; got {conn.value}"
        )


def _source_spectral(
    tm: TransitionMatrix, sd: Optional[SpectralData], config: NumericsConfig
) -> SpectralData:
    if sd is None:
        sd = spectral_data(
            tm.entries,
            stochastic=tm.variant is MatrixVariant.NORMALIZED,
            config=config,
        )
    if sd.rho <= 0.0:
        raise NumericalError("effective transitions need spectral radius > 0")
    return sd


def effective_transition_exact(
    tm: TransitionMatrix,
    sd: Optional[SpectralData] = None,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> EffectiveTransitionMatrix:
    """Exact effective transition matrix via one 2x2 isoradial reduction
    per unordered node pair.

    Off-diagonal entries are the reductions' off-diagonal entries; the
    diagonal entry for node i accumulates the reductions' own diagonal
    terms over all pairs containing i.  Each pair is reduced independently
    (O(n^5) overall), so this route is for small and mid-sized graphs; use
    the l-step form beyond that.
    """
    _require_connected(tm)
    sd = _source_spectral(tm, sd, config)
    M = tm.entries
    n = tm.n
    eps = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            red = isoradial_reduction(M, (i, j), sd.rho, config=config).entries
            eps[i, j] = red[0, 1]
            eps[j, i] = red[1, 0]
            eps[i, i] += red[0, 0]
            eps[j, j] += red[1, 1]
    return EffectiveTransitionMatrix(
        entries=eps,
        mode=MODE_EXACT,
        ell=None,
        source_variant=tm.variant,
        source_rho=sd.rho,
        source_stochastic=_is_stochastic(M),
        labels=tm.graph.labels,
    )


def scaled_effective(etm: EffectiveTransitionMatrix) -> np.ndarray:
    """Divide an exact effective transition matrix of a row-stochastic
    source by (n - 1), yielding a row-stochastic matrix again."""
    if etm.mode != MODE_EXACT:
        raise ConfigError("scaled form is defined for exact mode only")
    if not etm.source_stochastic:
        raise ConfigError("scaled form requires a row-stochastic source")
    if etm.n < 2:
        raise ConfigError("scaled form needs at least two nodes")
    return etm.entries / (etm.n - 1)


def gamma_set(delta: DistanceMatrix, i: int, j: int, ell: int) -> GammaSet:
    """Membership per the short-walk set formula: k belongs when
    d(i,k)+d(k,j) <= ell and d(j,k)+d(k,i) <= ell; i and j always belong.
    Unreachable distances fail both inequalities."""
    if i == j:
        raise ConfigError("gamma set requires i != j")
    if ell < 1:
        raise ConfigError("ell must be >= 1")
    d = delta.entries
    mask = (d[i, :] + d[:, j] <= ell) & (d[j, :] + d[:, i] <= ell)
    mask[i] = True
    mask[j] = True
    return GammaSet(i=i, j=j, ell=ell, members=frozenset(np.flatnonzero(mask).tolist()))


def lstep_reduction(
    tm: TransitionMatrix,
    pair: tuple,
    ell: int,
    delta: Optional[DistanceMatrix] = None,
    rho: Optional[float] = None,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> np.ndarray:
    """Truncated 2x2 reduction over S = {i, j}:

        M_SS + rho^-1 M_ST (sum_{k=0..ell} (rho^-1 M_TT)^k) M_TS,

    where T is the gamma set of the pair minus {i, j}.  The truncated sum
    is evaluated by iterated matrix-vector products (Horner style), never
    forming matrix powers.  An empty T returns M_SS.
    """
    i, j = (int(pair[0]), int(pair[1]))
    if delta is None:
        delta = bfs_distances(tm.graph)
    if rho is None:
        rho = _source_spectral(tm, None, config).rho
    if rho <= 0.0:
        raise NumericalError("l-step reduction needs spectral radius > 0")
    members = gamma_set(delta, i, j, ell).members
    tilde = sorted(members - {i, j})
    M = tm.entries
    S = [i, j]
    if not tilde:
        return M[np.ix_(S, S)].copy()
    rinv = 1.0 / rho
    B = M[np.ix_(tilde, S)]
    C = M[np.ix_(tilde, tilde)]
    X = B.copy()
    for _ in range(ell):
        X = B + rinv * (C @ X)
    return M[np.ix_(S, S)] + rinv * (M[np.ix_(S, tilde)] @ X)


@nb.njit(cache=True)
def _lstep_assemble(M, dist, ell, rinv):
    n = M.shape[0]
    eps = np.zeros((n, n))
    idx = np.empty(n, np.int64)
    sub = np.empty((n, n))
    bx = np.empty((n, 2))
    x = np.empty((n, 2))
    y = np.empty((n, 2))
    for i in range(n):
        for j in range(i + 1, n):
            cnt = 0
            # No k can satisfy both walk bounds unless both endpoints are
            # within ell of each other, so gate on that first.
            if dist[i, j] <= ell and dist[j, i] <= ell:
                for k in range(n):
                    if k == i or k == j:
                        continue
                    if (
                        dist[i, k] + dist[k, j] <= ell
                        and dist[j, k] + dist[k, i] <= ell
                    ):
                        idx[cnt] = k
                        cnt += 1
            if cnt == 0:
                r11 = M[i, i]
                r12 = M[i, j]
                r21 = M[j, i]
                r22 = M[j, j]
            else:
                for a in range(cnt):
                    ka = idx[a]
                    bx[a, 0] = M[ka, i]
                    bx[a, 1] = M[ka, j]
                    for b in range(cnt):
                        sub[a, b] = M[ka, idx[b]]
                for a in range(cnt):
                    x[a, 0] = bx[a, 0]
                    x[a, 1] = bx[a, 1]
                for _ in range(ell):
                    for a in range(cnt):
                        acc0 = 0.0
                        acc1 = 0.0
                        for b in range(cnt):
                            s = sub[a, b]
                            acc0 += s * x[b, 0]
                            acc1 += s * x[b, 1]
                        y[a, 0] = bx[a, 0] + rinv * acc0
                        y[a, 1] = bx[a, 1] + rinv * acc1
                    for a in range(cnt):
                        x[a, 0] = y[a, 0]
                        x[a, 1] = y[a, 1]
                acc00 = 0.0
                acc01 = 0.0
                acc10 = 0.0
                acc11 = 0.0
                for a in range(cnt):
                    ka = idx[a]
                    acc00 += M[i, ka] * x[a, 0]
                    acc01 += M[i, ka] * x[a, 1]
                    acc10 += M[j, ka] * x[a, 0]
                    acc11 += M[j, ka] * x[a, 1]
                r11 = M[i, i] + rinv * acc00
                r12 = M[i, j] + rinv * acc01
                r21 = M[j, i] + rinv * acc10
                r22 = M[j, j] + rinv * acc11
            eps[i, j] = r12
            eps[j, i] = r21
            eps[i, i] += r11
            eps[j, j] += r22
    return eps


def effective_transition_lstep(
    tm: TransitionMatrix,
    ell: int,
    delta: Optional[DistanceMatrix] = None,
    sd: Optional[SpectralData] = None,
    config: NumericsConfig = DEFAULT_NUMERICS,
) -> EffectiveTransitionMatrix:
    """l-step approximation of the effective transition matrix.

    Assembles the truncated 2x2 reductions of every unordered pair under
    the same index rule as the exact form.  Pairs whose gamma set is just
    {i, j} (no walk of length <= ell in one of the two directions) keep
    their direct entries M[i, j] and M[j, i], typically 0 for non-edges.
    The graph does not need to be strongly connected.
    """
    if ell < 1:
        raise ConfigError("ell must be >= 1")
    if delta is None:
        delta = bfs_distances(tm.graph)
    sd = _source_spectral(tm, sd, config)
    M = np.ascontiguousarray(tm.entries, dtype=np.float64)
    dist = np.ascontiguousarray(delta.entries, dtype=np.int64)
    eps = _lstep_assemble(M, dist, int(ell), 1.0 / sd.rho)
    return EffectiveTransitionMatrix(
        entries=eps,
        mode=MODE_LSTEP,
        ell=int(ell),
        source_variant=tm.variant,
        source_rho=sd.rho,
        source_stochastic=_is_stochastic(tm.entries),
        labels=tm.graph.labels,
    )


def et_score(
    etm: EffectiveTransitionMatrix, include_loops: bool = False
) -> ScoreTable:
    """Score table from an effective transition matrix: score(i, j) is
    epsilon[i, j] for i != j.  Loop scores are zeroed unless requested."""
    matrix = etm.entries.copy()
    if not include_loops:
        np.fill_diagonal(matrix, 0.0)
    prefix = "et" if etm.mode == MODE_EXACT else "eta"
    return ScoreTable(
        matrix=matrix,
        predictor_id=f"{prefix}-{etm.source_variant.value}",
        labels=etm.labels,
    )
