"""Edge-list parsing and CSV writers for predictions and reports.

Edge lists are whitespace- or comma-delimited text; lines starting with
'#' or '%' are comments.  The column order is declared by a schema drawn
from {src, dst, weight, timestamp}.  Scores are serialized with 12
significant digits, which exceeds every tolerance used elsewhere, so
write -> parse round-trips are lossless for ranking purposes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import IO, Iterable, List, Optional, Sequence

from .errors import ConfigError, DatasetError

SCHEMA_FIELDS = ("src", "dst", "weight", "timestamp")
PREDICTIONS_HEADER = ["rank", "src", "dst", "score", "in_test_set"]
REPORT_HEADER = [
    "predictor",
    "params",
    "kappa",
    "hits",
    "accuracy",
    "wall_time_ms",
    "status",
]


@dataclass(frozen=True)
class EdgeRecord:
    """One parsed edge-list line."""

    src_label: str
    dst_label: str
    weight: Optional[float] = None
    timestamp: Optional[int] = None


def validate_schema(schema: Sequence[str]) -> tuple:
    cols = tuple(schema)
    if len(set(cols)) != len(cols):
        raise ConfigError(f"schema has repeated columns: {cols}")
    unknown = [c for c in cols if c not in SCHEMA_FIELDS]
    if unknown:
        raise ConfigError(f"unknown schema columns: {unknown}")
    if "src" not in cols or "dst" not in cols:
        raise ConfigError("schema must include 'src' and 'dst'")
    return cols


def _decode(stream: IO) -> Iterable[str]:
    for line in stream:
        if isinstance(line, bytes):
            yield line.decode("utf-8")
        else:
            yield line


def parse_edge_list(stream: IO, schema: Sequence[str]) -> List[EdgeRecord]:
    """Parse an edge-list stream into records, in file order.

    Lines may carry more fields than the schema names; extras are ignored.
    Malformed lines (too few fields, unparseable weight or timestamp,
    empty labels) raise DatasetError with the 1-based line number.  A
    stream yielding no records at all is an error.
    """
    cols = validate_schema(schema)
    records: List[EdgeRecord] = []
    for lineno, line in enumerate(_decode(stream), start=1):
        text = line.strip()
        if not text or text.startswith("#") or text.startswith("%"):
            continue
        fields = text.replace(",", " ").split()
        if len(fields) < len(cols):
            raise DatasetError(
                f"line {lineno}: expected at least {len(cols)} fields, "
                f"got {len(fields)}"
            )
        row = dict(zip(cols, fields))
        weight = None
        if "weight" in row:
            try:
                weight = float(row["weight"])
            except ValueError:
                raise DatasetError(
                    f"line {lineno}: unparseable weight {row['weight']!r}"
                ) from None
            if not (weight == weight and abs(weight) != float("inf")):
                raise DatasetError(f"line {lineno}: non-finite weight")
        timestamp = None
        if "timestamp" in row:
            raw = row["timestamp"]
            try:
                timestamp = int(raw)
            except ValueError:
                try:
                    as_float = float(raw)
                except ValueError:
                    raise DatasetError(
                        f"line {lineno}: unparseable timestamp {raw!r}"
                    ) from None
                if not as_float.is_integer():
                    raise DatasetError(
                        f"line {lineno}: non-integer timestamp {raw!r}"
                    )
                timestamp = int(as_float)
        if not row["src"] or not row["dst"]:
            raise DatasetError(f"line {lineno}: empty node label")
        records.append(
            EdgeRecord(
                src_label=row["src"],
                dst_label=row["dst"],
                weight=weight,
                timestamp=timestamp,
            )
        )
    if not records:
        raise DatasetError("edge list contains no records")
    return records


def format_score(score: float) -> str:
    return f"{score:.12g}"


def write_ranked_predictions(rows: Iterable[tuple], sink: IO) -> None:
    """Write ranked predictions as CSV.

    ``rows`` yields (src_label, dst_label, score, in_test_set) in rank
    order; ranks are assigned 1-based.  Column order and formatting are
    fixed so identical inputs produce byte-identical files.
    """
    text = io.StringIO()
    writer = csv.writer(text, lineterminator="\n")
    writer.writerow(PREDICTIONS_HEADER)
    for rank, (src, dst, score, in_test) in enumerate(rows, start=1):
        writer.writerow(
            [rank, src, dst, format_score(score), "true" if in_test else "false"]
        )
    payload = text.getvalue()
    try:
        sink.write(payload)
    except TypeError:
        sink.write(payload.encode("utf-8"))


@dataclass(frozen=True)
class PredictionRow:
    rank: int
    src: str
    dst: str
    score: float
    in_test_set: bool


def read_ranked_predictions(stream: IO) -> List[PredictionRow]:
    """Inverse of write_ranked_predictions (labels come back as strings)."""
    lines = list(_decode(stream))
    reader = csv.reader(lines)
    header = next(reader, None)
    if header != PREDICTIONS_HEADER:
        raise DatasetError(f"unexpected predictions header: {header}")
    out = []
    for row in reader:
        if len(row) != 5:
            raise DatasetError(f"malformed predictions row: {row}")
        out.append(
            PredictionRow(
                rank=int(row[0]),
                src=row[1],
                dst=row[2],
                score=float(row[3]),
                in_test_set=row[4] == "true",
            )
        )
    return out


def write_report(rows: Iterable[dict], sink: IO, metadata: Optional[dict] = None):
    """Write the per-predictor accuracy report as CSV.

    ``metadata`` (dataset shape, configuration echo) is emitted as leading
    '#' comment lines so the body stays a plain CSV table.
    """
    text = io.StringIO()
    if metadata:
        for key in metadata:
            text.write(f"# {key}={metadata[key]}\n")
    writer = csv.writer(text, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for row in rows:
        writer.writerow(
            [
                row["predictor"],
                row["params"],
                row["kappa"],
                row["hits"],
                format_score(row["accuracy"]) if row["accuracy"] is not None else "",
                row["wall_time_ms"],
                row["status"],
            ]
        )
    payload = text.getvalue()
    try:
        sink.write(payload)
    except TypeError:
        sink.write(payload.encode("utf-8"))
