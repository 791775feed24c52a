"""Run the predictor comparison on a dataset or a synthetic graph.

Examples:
    python scripts/run_benchmark.py --synthetic-pa 500 8 --undirected
    python scripts/run_benchmark.py --dataset edges.txt --schema src,dst,timestamp \
        --directed --predictors katz,eta-normalized:ell=3
"""

from __future__ import annotations

import argparse
import sys
import tempfile
from pathlib import Path

from etlink.cli import parse_predictor
from etlink.errors import EtlinkError
from etlink.harness import ExperimentConfig, run_experiment
from etlink.io_formats import validate_schema
from etlink.synthetic import preferential_attachment_edges, write_edge_list

DEFAULT_UNDIRECTED = (
    "shortest-path,katz,hitting-time,common-neighbors,jaccard,"
    "preferential-attachment,resistance-distance,et-normalized,et-standard,"
    "eta-normalized:ell=3,eta-standard:ell=3"
)
DEFAULT_DIRECTED = (
    "shortest-path,katz,hitting-time,et-normalized,et-standard,"
    "eta-normalized:ell=3,eta-standard:ell=3"
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--dataset", help="edge-list file to evaluate")
    source.add_argument(
        "--synthetic-pa",
        nargs=2,
        type=int,
        metavar=("N", "EDGES_PER_NODE"),
        help="generate a preferential-attachment graph instead",
    )
    direction = parser.add_mutually_exclusive_group(required=True)
    direction.add_argument("--directed", action="store_true")
    direction.add_argument("--undirected", action="store_true")
    parser.add_argument("--schema", default="src,dst")
    parser.add_argument("--weighted", action="store_true")
    parser.add_argument("--predictors", default=None, help="comma-separated specs")
    parser.add_argument("--split", type=float, default=0.8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default=None)
    args = parser.parse_args()

    out_dir = Path(args.out_dir) if args.out_dir else Path(tempfile.mkdtemp())
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.synthetic_pa:
        n, k = args.synthetic_pa
        dataset = out_dir / f"pa-{n}-{k}.txt"
        write_edge_list(preferential_attachment_edges(n, k, seed=args.seed), dataset)
        print(f"generated {dataset}")
    else:
        dataset = Path(args.dataset)

    spec_text = args.predictors or (
        DEFAULT_DIRECTED if args.directed else DEFAULT_UNDIRECTED
    )
    predictors = [parse_predictor(t) for t in spec_text.split(",") if t]

    config = ExperimentConfig(
        input_path=str(dataset),
        schema=validate_schema(tuple(args.schema.split(","))),
        directed=args.directed,
        weighted=args.weighted,
        predictors=predictors,
        split_fraction=args.split,
        out_report=str(out_dir / "report.csv"),
        out_predictions=str(out_dir / "predictions.csv"),
    )
    try:
        report = run_experiment(config)
    except EtlinkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    meta = report.metadata
    print(
        f"\ntrain: n={meta['train_nodes']} m={meta['train_edges']} "
        f"kappa={meta['kappa']} dropped={meta['dropped_test_edges']}"
    )
    print(f"{'predictor':<26} {'accuracy':>9} {'hits':>6} {'wall ms':>9}  status")
    for row in report.rows:
        if row.status == "ok":
            print(
                f"{row.predictor:<26} {row.accuracy:>9.4f} {row.hits:>6d} "
                f"{row.wall_time_ms:>9d}  ok"
            )
        else:
            print(f"{row.predictor:<26} {'-':>9} {'-':>6} {'-':>9}  {row.status}")
    print(f"\nreport: {out_dir / 'report.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
