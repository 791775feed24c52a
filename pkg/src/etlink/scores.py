"""Predictor-agnostic score tables and deterministic ranking.

Scores are compared after rounding to 12 significant digits, the same
precision at which they are serialized.  This collapses solver noise well
below every stated tolerance, so analytically tied scores form stable tie
groups, which are then broken by ascending (src, dst) original labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

RANKING_SIGNIFICANT_DIGITS = 12


@dataclass(frozen=True)
class ScoreTable:
    """Dense map from ordered node pairs (i, j), i != j, to real scores.

    ``matrix[i, j]`` is score(i, j) in internal node ids; ``labels`` maps
    ids back to the caller's node labels for reporting and tie-breaks.
    Higher scores always mean "more likely link" (negated metrics encode
    distance-like predictors).
    """

    matrix: np.ndarray
    predictor_id: str
    labels: Optional[tuple] = None
    higher_is_better: bool = True

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def score(self, i: int, j: int) -> float:
        return float(self.matrix[i, j])

    def label_array(self) -> np.ndarray:
        labels = self.labels if self.labels is not None else tuple(range(self.n))
        arr = np.asarray(labels)
        if arr.ndim != 1:  # composite labels (e.g. tuples) stay one per slot
            arr = np.empty(len(labels), dtype=object)
            arr[:] = labels
        return arr


def quantize_scores(values: np.ndarray, digits: int = RANKING_SIGNIFICANT_DIGITS):
    """Round to ``digits`` significant digits, elementwise."""
    x = np.asarray(values, dtype=np.float64)
    out = x.copy()
    nz = (x != 0) & np.isfinite(x)
    if not np.any(nz):
        return out
    mag = np.floor(np.log10(np.abs(x[nz])))
    with np.errstate(over="ignore", invalid="ignore"):
        scale = np.power(10.0, digits - 1 - mag)
        scaled = np.where(
            np.isfinite(scale), np.round(x[nz] * scale) / scale, x[nz]
        )
    out[nz] = scaled
    return out


def rank_pairs(
    table: ScoreTable, pairs: np.ndarray, descending: bool = True
) -> np.ndarray:
    """Order pair indices by (score, tie-break).

    Primary key: quantized score, descending by default.  Ties break by
    ascending (src, dst) original labels.  Returns the permutation of row
    indices into ``pairs``.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    raw = table.matrix[pairs[:, 0], pairs[:, 1]]
    q = quantize_scores(raw)
    labels = table.label_array()
    src_lab = labels[pairs[:, 0]]
    dst_lab = labels[pairs[:, 1]]
    key = -q if descending else q
    if labels.dtype == object:
        order = sorted(
            range(len(pairs)), key=lambda t: (key[t], src_lab[t], dst_lab[t])
        )
        return np.asarray(order, dtype=np.int64)
    return np.lexsort((dst_lab, src_lab, key))


def ranked_pair_list(
    table: ScoreTable, pairs: np.ndarray, descending: bool = True
) -> list:
    """Rank and materialize as [(src_id, dst_id, raw_score), ...]."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    order = rank_pairs(table, pairs, descending=descending)
    raw = table.matrix[pairs[:, 0], pairs[:, 1]]
    return [
        (int(pairs[t, 0]), int(pairs[t, 1]), float(raw[t]))
        for t in order
    ]
