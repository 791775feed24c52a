"""Temporal-split evaluation protocol and predictor orchestration.

The protocol: the first fraction of edges (by timestamp when present,
else file order) forms the training graph; test edges whose endpoints
never appear in training are dropped (they are unpredictable); the
training graph is then restricted to its largest (strongly) connected
component, which the score functions require, and the test set is
re-filtered against it.  Each predictor ranks the training graph's
non-edges and is measured by the fraction of its top-kappa predictions
that are test edges.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .baselines import (
    common_neighbors_score,
    hitting_time_score,
    jaccard_score,
    katz_score,
    preferential_attachment_score,
    resistance_distance_score,
    shortest_path_score,
)
from .effective import (
    effective_transition_exact,
    effective_transition_lstep,
    et_score,
)
from .errors import ConfigError, DatasetError
from .graph import (
    Graph,
    MatrixVariant,
    adjacency_matrix,
    build_graph,
    largest_component,
    normalized_matrix,
    weighted_matrix,
)
from .io_formats import EdgeRecord, parse_edge_list, write_ranked_predictions, write_report
from .scores import ScoreTable, rank_pairs, ranked_pair_list
from .spectral import spectral_data

log = logging.getLogger(__name__)

PREDICTOR_NAMES = (
    "shortest-path",
    "katz",
    "hitting-time",
    "common-neighbors",
    "jaccard",
    "preferential-attachment",
    "resistance-distance",
    "et-standard",
    "et-normalized",
    "et-weighted",
    "eta-standard",
    "eta-normalized",
    "eta-weighted",
)
UNDIRECTED_ONLY = frozenset(
    ("common-neighbors", "jaccard", "preferential-attachment", "resistance-distance")
)
WEIGHT_REQUIRED = frozenset(("et-weighted", "eta-weighted"))
DEFAULT_ELL = 3
DEFAULT_EXACT_NODE_CAP = 1500


@dataclass(frozen=True)
class PredictorSpec:
    name: str
    params: dict = field(default_factory=dict)

    def echo(self) -> str:
        if not self.params:
            return ""
        return ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))


@dataclass(frozen=True)
class SplitResult:
    """Training graph plus the filtered test set.

    ``test_edges`` holds internal-id pairs of the training graph
    (canonicalized for undirected graphs); ``dropped`` counts raw test
    records that did not survive filtering (missing endpoints, endpoints
    outside the training component, or duplicates of earlier test edges).
    """

    train: Graph
    test_edges: FrozenSet[Tuple[int, int]]
    kappa: int
    dropped: int
    total_records: int
    train_record_count: int

    @property
    def raw_test_count(self) -> int:
        return self.total_records - self.train_record_count


@dataclass(frozen=True)
class TopKPredictions:
    pairs: List[Tuple[int, int, float]]
    kappa_capped: bool = False


@dataclass(frozen=True)
class ReportRow:
    predictor: str
    params: str
    kappa: Optional[int]
    hits: Optional[int]
    accuracy: Optional[float]
    wall_time_ms: Optional[int]
    status: str


@dataclass(frozen=True)
class ExperimentReport:
    rows: List[ReportRow]
    metadata: dict


@dataclass(frozen=True)
class ExperimentConfig:
    input_path: str
    schema: Sequence[str]
    directed: bool
    predictors: Sequence[PredictorSpec]
    weighted: bool = False
    split_fraction: float = 0.8
    kappa: Optional[int] = None
    include_loops: bool = False
    exact_node_cap: int = DEFAULT_EXACT_NODE_CAP
    sort_labels: bool = False
    out_report: Optional[str] = None
    out_predictions: Optional[str] = None


def temporal_split(
    records: Sequence[EdgeRecord],
    fraction: float,
    directed: bool,
    weighted: bool = False,
    sort_labels: bool = False,
) -> SplitResult:
    """Split records into a training graph and a filtered test-edge set."""
    if not (0.0 < fraction < 1.0):
        raise ConfigError(f"split fraction must lie in (0, 1); got {fraction}")
    m = len(records)
    with_ts = sum(1 for r in records if r.timestamp is not None)
    if with_ts and with_ts != m:
        raise DatasetError(
            "timestamps must be present on all records or on none"
        )
    ordered = (
        sorted(records, key=lambda r: r.timestamp) if with_ts else list(records)
    )
    n_train = math.ceil(fraction * m)
    train_records = ordered[:n_train]
    test_records = ordered[n_train:]

    def as_edge(r: EdgeRecord):
        return (r.src_label, r.dst_label, r.weight if r.weight is not None else 1.0,
                r.timestamp)

    train_full = build_graph(
        [as_edge(r) for r in train_records],
        directed=directed,
        weighted=weighted,
        sort_labels=sort_labels,
    )
    train_nodes = set(train_full.labels)
    survivors = [
        r for r in test_records
        if r.src_label in train_nodes and r.dst_label in train_nodes
    ]
    train = largest_component(train_full)
    component_nodes = {lab: i for i, lab in enumerate(train.labels)}
    test_edges = set()
    for r in survivors:
        i = component_nodes.get(r.src_label)
        j = component_nodes.get(r.dst_label)
        if i is None or j is None:
            continue
        if not directed and i > j:
            i, j = j, i
        test_edges.add((i, j))
    kappa = len(test_edges)
    if kappa == 0:
        raise DatasetError("no predictable test edges after filtering")
    dropped = len(test_records) - kappa
    return SplitResult(
        train=train,
        test_edges=frozenset(test_edges),
        kappa=kappa,
        dropped=dropped,
        total_records=m,
        train_record_count=n_train,
    )


def candidate_pairs(train: Graph, include_loops: bool = False) -> np.ndarray:
    """Node pairs of the training graph with no existing edge: all ordered
    pairs for directed graphs, pairs with i < j for undirected ones.
    Loops are excluded unless requested."""
    n = train.n
    present = np.zeros((n, n), dtype=bool)
    present[train.src, train.dst] = True
    if not train.directed:
        present[train.dst, train.src] = True
    free = ~present
    if not include_loops:
        np.fill_diagonal(free, False)
    if not train.directed:
        free &= ~np.tri(n, k=-1, dtype=bool)
    ii, jj = np.nonzero(free)
    return np.column_stack([ii, jj]).astype(np.int64)


def top_k_predict(
    table: ScoreTable, candidates: np.ndarray, kappa: int
) -> TopKPredictions:
    """Rank candidates (descending score, ties by ascending labels) and
    keep the top kappa.  Requesting more than there are candidates logs a
    warning and returns the full ranking."""
    if kappa < 1:
        raise ConfigError(f"kappa must be >= 1; got {kappa}")
    candidates = np.asarray(candidates, dtype=np.int64).reshape(-1, 2)
    order = rank_pairs(table, candidates, descending=True)
    capped = kappa > len(order)
    if capped:
        log.warning(
            "kappa=%d exceeds candidate count %d; returning all candidates",
            kappa,
            len(order),
        )
    take = order if capped else order[:kappa]
    pairs = [
        (
            int(candidates[t, 0]),
            int(candidates[t, 1]),
            float(table.matrix[candidates[t, 0], candidates[t, 1]]),
        )
        for t in take
    ]
    return TopKPredictions(pairs=pairs, kappa_capped=capped)


def accuracy(
    predicted: Sequence[Tuple[int, int, float]],
    test_edges: FrozenSet[Tuple[int, int]],
) -> float:
    """Fraction of predicted pairs that are test edges."""
    if not predicted:
        raise ConfigError("cannot compute accuracy of an empty prediction list")
    hits = sum(1 for (i, j, _) in predicted if (i, j) in test_edges)
    return hits / len(predicted)


def rank_existing_edges(
    table: ScoreTable, train: Graph, ascending: bool = True
) -> List[Tuple[int, int, float]]:
    """Rank the graph's existing edges by score, ascending by default so
    the lowest-scored (most suspect) edges come first."""
    pairs = np.column_stack([train.src, train.dst]).astype(np.int64)
    return ranked_pair_list(table, pairs, descending=not ascending)


def _et_transition(train: Graph, variant: str):
    if variant == "standard":
        return adjacency_matrix(train)
    if variant == "normalized":
        return normalized_matrix(train)
    return weighted_matrix(train)


def _check_params(spec: PredictorSpec, allowed: Tuple[str, ...]) -> None:
    unknown = [k for k in spec.params if k not in allowed]
    if unknown:
        raise ConfigError(
            f"predictor {spec.name!r} does not accept parameters {unknown}"
        )


def score_predictor(
    train: Graph,
    spec: PredictorSpec,
    include_loops: bool = False,
    exact_node_cap: int = DEFAULT_EXACT_NODE_CAP,
) -> ScoreTable:
    """Compute the score table for one predictor on the training graph."""
    name = spec.name
    if name not in PREDICTOR_NAMES:
        raise ConfigError(f"unknown predictor {name!r}")
    if name in UNDIRECTED_ONLY and train.directed:
        raise ConfigError(f"{name} is defined for undirected graphs only")
    if name in WEIGHT_REQUIRED and not train.weighted:
        raise ConfigError(f"{name} requires a weighted dataset")

    if name == "shortest-path":
        _check_params(spec, ())
        return shortest_path_score(train)
    if name == "katz":
        _check_params(spec, ("beta",))
        beta = spec.params.get("beta")
        return katz_score(train, beta=None if beta is None else float(beta))
    if name == "hitting-time":
        _check_params(spec, ())
        return hitting_time_score(train)
    if name == "common-neighbors":
        _check_params(spec, ())
        return common_neighbors_score(train)
    if name == "jaccard":
        _check_params(spec, ())
        return jaccard_score(train)
    if name == "preferential-attachment":
        _check_params(spec, ())
        return preferential_attachment_score(train)
    if name == "resistance-distance":
        _check_params(spec, ())
        return resistance_distance_score(train)

    mode, variant = name.split("-", 1)
    tm = _et_transition(train, variant)
    if mode == "et":
        _check_params(spec, ())
        if train.n > exact_node_cap:
            raise ConfigError(
                f"exact effective transitions refused: n={train.n} exceeds the "
                f"node cap {exact_node_cap}; use the l-step predictor "
                f"eta-{variant} instead"
            )
        sd = spectral_data(
            tm.entries, stochastic=tm.variant is MatrixVariant.NORMALIZED
        )
        etm = effective_transition_exact(tm, sd)
    else:
        _check_params(spec, ("ell",))
        ell = int(spec.params.get("ell", DEFAULT_ELL))
        sd = spectral_data(
            tm.entries, stochastic=tm.variant is MatrixVariant.NORMALIZED
        )
        etm = effective_transition_lstep(tm, ell, sd=sd)
    return et_score(etm, include_loops=include_loops)


def _is_applicable(spec: PredictorSpec, train: Graph) -> Optional[str]:
    if spec.name in UNDIRECTED_ONLY and train.directed:
        return "requires an undirected dataset"
    if spec.name in WEIGHT_REQUIRED and not train.weighted:
        return "requires a weighted dataset"
    return None


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run the full protocol: parse, split, score each predictor, measure
    top-kappa accuracy, and optionally write the report and prediction
    files.

    Predictors that do not apply to the dataset's type (undirected-only on
    a directed dataset, weighted variants on an unweighted one) produce a
    skipped row; an exact effective-transition predictor on a graph above
    the node cap is refused outright.
    """
    for spec in config.predictors:
        if spec.name not in PREDICTOR_NAMES:
            raise ConfigError(f"unknown predictor {spec.name!r}")
    if config.weighted and "weight" not in tuple(config.schema):
        raise ConfigError("weighted datasets need a 'weight' column in the schema")
    path = Path(config.input_path)
    if not path.exists():
        raise DatasetError(f"input file not found: {path}")
    with open(path, "rb") as fh:
        records = parse_edge_list(fh, config.schema)
    split = temporal_split(
        records,
        config.split_fraction,
        directed=config.directed,
        weighted=config.weighted,
        sort_labels=config.sort_labels,
    )
    train = split.train
    candidates = candidate_pairs(train, include_loops=config.include_loops)
    if len(candidates) == 0:
        raise DatasetError("training graph has no candidate pairs to score")
    kappa = split.kappa if config.kappa is None else config.kappa
    if kappa < 1:
        raise ConfigError(f"kappa must be >= 1; got {kappa}")

    rows: List[ReportRow] = []
    prediction_files: Dict[str, List[tuple]] = {}
    for idx, spec in enumerate(config.predictors):
        reason = _is_applicable(spec, train)
        if reason is not None:
            log.info("skipping %s: %s", spec.name, reason)
            rows.append(
                ReportRow(
                    predictor=spec.name,
                    params=spec.echo(),
                    kappa=None,
                    hits=None,
                    accuracy=None,
                    wall_time_ms=None,
                    status=f"skipped: {reason}",
                )
            )
            continue
        t0 = time.perf_counter()
        table = score_predictor(
            train,
            spec,
            include_loops=config.include_loops,
            exact_node_cap=config.exact_node_cap,
        )
        wall_ms = int(round((time.perf_counter() - t0) * 1000))
        predicted = top_k_predict(table, candidates, kappa)
        hits = sum(1 for (i, j, _) in predicted.pairs if (i, j) in split.test_edges)
        acc = hits / len(predicted.pairs)
        rows.append(
            ReportRow(
                predictor=spec.name,
                params=spec.echo(),
                kappa=len(predicted.pairs),
                hits=hits,
                accuracy=acc,
                wall_time_ms=wall_ms,
                status="ok",
            )
        )
        key = f"{idx:02d}-{spec.name}" if len(config.predictors) > 1 else spec.name
        prediction_files[key] = [
            (
                train.labels[i],
                train.labels[j],
                score,
                (i, j) in split.test_edges,
            )
            for (i, j, score) in predicted.pairs
        ]

    metadata = {
        "input": config.input_path,
        "directed": config.directed,
        "weighted": config.weighted,
        "records": split.total_records,
        "train_records": split.train_record_count,
        "train_nodes": train.n,
        "train_edges": train.m,
        "kappa": kappa,
        "dropped_test_edges": split.dropped,
        "split_fraction": config.split_fraction,
        "include_loops": config.include_loops,
        "test_filter": "endpoints-must-appear-in-training-component",
    }
    report = ExperimentReport(rows=rows, metadata=metadata)

    if config.out_report is not None:
        with open(config.out_report, "w", encoding="utf-8") as fh:
            write_report(
                [
                    {
                        "predictor": r.predictor,
                        "params": r.params,
                        "kappa": r.kappa if r.kappa is not None else "",
                        "hits": r.hits if r.hits is not None else "",
                        "accuracy": r.accuracy,
                        "wall_time_ms": r.wall_time_ms
                        if r.wall_time_ms is not None
                        else "",
                        "status": r.status,
                    }
                    for r in rows
                ],
                fh,
                metadata=metadata,
            )
    if config.out_predictions is not None:
        base = Path(config.out_predictions)
        for key, preds in prediction_files.items():
            target = (
                base
                if len(prediction_files) == 1
                else base.with_name(f"{base.stem}.{key}{base.suffix}")
            )
            with open(target, "w", encoding="utf-8") as fh:
                write_ranked_predictions(preds, fh)
    return report
