"""Labeled graph records and their JSON Lines serialization.

One record per line::

    {"id": "g0", "num_nodes": 3, "edges": [[0, 1], [1, 2]], "features": null,
     "y": {"cycle3": 0}, "split": "train"}

Edges are written once per unordered pair with ``u < v``.  ``split`` is one
of ``train``/``valid``/``test``, an integer fold index, or ``null``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Union

from .counting import KIND_BY_NAME
from .graph import Graph, GraphError, build_graph

Split = Union[str, int, None]
SPLIT_NAMES = ("train", "valid", "test")


class DatasetError(ValueError):
    """Malformed dataset content; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class DatasetRecord:
    """A graph together with its split tag; labels live in ``graph.targets``."""

    graph: Graph
    split: Split = None

    @property
    def y(self) -> Mapping[str, object]:
        return self.graph.targets

    @property
    def id(self) -> str:
        return self.graph.id

    def with_split(self, split: Split) -> "DatasetRecord":
        return DatasetRecord(self.graph, split)

    def with_graph(self, graph: Graph) -> "DatasetRecord":
        return DatasetRecord(graph, self.split)


def make_record(graph: Graph, y: Mapping[str, object] | None = None, split: Split = None) -> DatasetRecord:
    if y is not None:
        graph = graph.replace(targets=y)
    validate_record(DatasetRecord(graph, split))
    return DatasetRecord(graph, split)


def _is_nonneg_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def validate_record(rec: DatasetRecord) -> None:
    split = rec.split
    if not (split is None or split in SPLIT_NAMES or _is_nonneg_int(split)):
        raise DatasetError(f"invalid split tag {split!r}")
    for name, value in rec.y.items():
        if name in KIND_BY_NAME:
            if not _is_nonneg_int(value):
                raise DatasetError(f"counting target {name!r} must be a non-negative integer, got {value!r}")
        elif name == "label":
            labels = value if isinstance(value, list) else [value]
            if not all(_is_nonneg_int(c) for c in labels):
                raise DatasetError(f"class labels must be non-negative integers, got {value!r}")
        elif not isinstance(value, (int, float)) or isinstance(value, bool):
            raise DatasetError(f"target {name!r} must be numeric, got {value!r}")


def record_to_dict(rec: DatasetRecord) -> dict:
    g = rec.graph
    return {
        "id": g.id,
        "num_nodes": g.num_nodes,
        "edges": [list(e) for e in g.edges],
        "features": None if g.features is None else [list(r) for r in g.features],
        "y": dict(g.targets),
        "split": rec.split,
    }


def record_from_dict(obj: dict) -> DatasetRecord:
    try:
        num_nodes = obj["num_nodes"]
        edges = obj["edges"]
    except (KeyError, TypeError) as exc:
        raise DatasetError(f"missing field {exc}") from None
    if not _is_nonneg_int(num_nodes):
        raise DatasetError(f"num_nodes must be a non-negative integer, got {num_nodes!r}")
    if not isinstance(edges, list) or not all(isinstance(e, list) and len(e) == 2 for e in edges):
        raise DatasetError("edges must be a list of [u, v] pairs")
    y = obj.get("y") or {}
    if not isinstance(y, dict):
        raise DatasetError("y must be an object")
    graph = build_graph(num_nodes, edges, features=obj.get("features"), targets=y, id=str(obj.get("id", "")))
    rec = DatasetRecord(graph, obj.get("split"))
    validate_record(rec)
    return rec


def dumps_record(rec: DatasetRecord, **extra) -> str:
    d = record_to_dict(rec)
    d.update(extra)
    return json.dumps(d)


def write_dataset(records: Iterable[DatasetRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            validate_record(rec)
            fh.write(dumps_record(rec))
            fh.write("\n")


def read_dataset(path: str | Path) -> list[DatasetRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                records.append(record_from_dict(json.loads(line)))
            except DatasetError as exc:
                raise DatasetError(str(exc), lineno) from None
            except (GraphError, json.JSONDecodeError, TypeError, ValueError) as exc:
                raise DatasetError(str(exc), lineno) from None
    return records
