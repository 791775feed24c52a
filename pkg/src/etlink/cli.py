"""Command-line interface.

    etlink predict --input edges.txt --schema src,dst --directed \
        --predictor et-normalized --predictor katz:beta=0.05 \
        --out-report report.csv --out-predictions predictions.csv

Exit codes: 0 on success, 2 on configuration errors, 3 on dataset errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from .errors import ConfigError, DatasetError, EtlinkError
from .harness import (
    DEFAULT_EXACT_NODE_CAP,
    ExperimentConfig,
    PREDICTOR_NAMES,
    PredictorSpec,
    run_experiment,
)
from .io_formats import validate_schema

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATASET = 3

_PARAM_TYPES = {"beta": float, "ell": int}


def parse_predictor(text: str) -> PredictorSpec:
    """Parse NAME[:param=val,...] into a PredictorSpec."""
    name, _, rest = text.partition(":")
    name = name.strip()
    if name not in PREDICTOR_NAMES:
        raise ConfigError(
            f"unknown predictor {name!r}; choose from {', '.join(PREDICTOR_NAMES)}"
        )
    params = {}
    if rest:
        for piece in rest.split(","):
            key, sep, value = piece.partition("=")
            key = key.strip()
            if not sep or not key:
                raise ConfigError(f"malformed predictor parameter {piece!r}")
            caster = _PARAM_TYPES.get(key)
            if caster is None:
                raise ConfigError(f"unknown predictor parameter {key!r}")
            try:
                params[key] = caster(value)
            except ValueError:
                raise ConfigError(
                    f"parameter {key!r} expects {caster.__name__}, got {value!r}"
                ) from None
    return PredictorSpec(name=name, params=params)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="etlink", description="Effective-transition link prediction toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("predict", help="run the temporal-split prediction benchmark")
    p.add_argument("--input", required=True, help="edge-list file")
    p.add_argument(
        "--schema",
        default="src,dst",
        help="comma-separated column order among src,dst,weight,timestamp",
    )
    direction = p.add_mutually_exclusive_group(required=True)
    direction.add_argument("--directed", action="store_true")
    direction.add_argument("--undirected", action="store_true")
    p.add_argument("--weighted", action="store_true")
    p.add_argument(
        "--predictor",
        action="append",
        required=True,
        metavar="NAME[:param=val,...]",
        help="may be given multiple times",
    )
    p.add_argument("--split", type=float, default=0.8)
    p.add_argument("--kappa", type=int, default=None)
    p.add_argument("--ell", type=int, default=None, help="default l for eta predictors")
    p.add_argument("--beta", type=float, default=None, help="default beta for katz")
    p.add_argument("--include-loops", action="store_true")
    p.add_argument("--exact-node-cap", type=int, default=DEFAULT_EXACT_NODE_CAP)
    p.add_argument("--out-report", required=True)
    p.add_argument("--out-predictions", required=True)
    p.add_argument(
        "--seed-label-order",
        action="store_true",
        help="assign node ids in sorted label order instead of first appearance",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _apply_defaults(specs: List[PredictorSpec], ell, beta) -> List[PredictorSpec]:
    out = []
    for spec in specs:
        params = dict(spec.params)
        if spec.name.startswith("eta-") and ell is not None and "ell" not in params:
            params["ell"] = ell
        if spec.name == "katz" and beta is not None and "beta" not in params:
            params["beta"] = beta
        out.append(PredictorSpec(spec.name, params))
    return out


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        schema = validate_schema(tuple(s.strip() for s in args.schema.split(",")))
        specs = _apply_defaults(
            [parse_predictor(t) for t in args.predictor], args.ell, args.beta
        )
        config = ExperimentConfig(
            input_path=args.input,
            schema=schema,
            directed=args.directed,
            weighted=args.weighted,
            predictors=specs,
            split_fraction=args.split,
            kappa=args.kappa,
            include_loops=args.include_loops,
            exact_node_cap=args.exact_node_cap,
            sort_labels=args.seed_label_order,
            out_report=args.out_report,
            out_predictions=args.out_predictions,
        )
        report = run_experiment(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATASET
    except EtlinkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for row in report.rows:
        if row.status == "ok":
            print(
                f"{row.predictor:28s} kappa={row.kappa:<6d} hits={row.hits:<6d} "
                f"accuracy={row.accuracy:.4f} wall_ms={row.wall_time_ms}"
            )
        else:
            print(f"{row.predictor:28s} {row.status}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
