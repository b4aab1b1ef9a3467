"""Synthetic substructure-counting benchmark (random graphs + oracle labels)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._parallel import pmap
from .counting import ALL_KINDS, SubstructureKind, count_all
from .dataset import SPLIT_NAMES, DatasetRecord
from .graph import GraphError, gen_random_graph
from .seeding import mix_seed

# stream index reserved for the split shuffle; graph i uses stream i
SPLIT_STREAM = 2**63 - 1

# geometric benchmark defaults: 5000 graphs, ~18.8 nodes, ~31.34 edges, 3/2/5 split
GE_NUM_GRAPHS = 5000
GE_NODE_RANGE = (15, 23)
GE_AVG_EDGES = 31.34
GE_SPLIT = (3, 2, 5)


@dataclass(frozen=True)
class GenSpec:
    kinds: tuple[SubstructureKind, ...] = ALL_KINDS
    num_graphs: int = GE_NUM_GRAPHS
    node_range: tuple[int, int] = GE_NODE_RANGE
    target_avg_edges: float = GE_AVG_EDGES
    seed: int = 0
    split_ratio: tuple[int, int, int] = GE_SPLIT

    def __post_init__(self):
        if self.num_graphs < 1:
            raise ValueError("num_graphs must be at least 1")
        if len(self.split_ratio) != 3 or any(r <= 0 for r in self.split_ratio):
            raise ValueError(f"split ratio components must be positive, got {self.split_ratio}")
        lo, hi = self.node_range
        if lo > hi or lo < 3:
            raise GraphError(f"infeasible node range [{lo}, {hi}]")


def ratio_split_sizes(n: int, ratio: Sequence[int]) -> tuple[int, ...]:
    """Floor share for every part but the first; the first (train) takes the remainder."""
    total = sum(ratio)
    rest = [n * r // total for r in ratio[1:]]
    return (n - sum(rest), *rest)


def ratio_split_tags(n: int, ratio: Sequence[int], seed: int) -> list[str]:
    """Split tag per index after a seeded shuffle."""
    if len(ratio) != 3:
        raise ValueError("ratio split needs exactly three parts (train:valid:test)")
    sizes = ratio_split_sizes(n, ratio)
    order = np.random.default_rng(mix_seed(seed, SPLIT_STREAM)).permutation(n)
    tags = [""] * n
    pos = 0
    for name, size in zip(SPLIT_NAMES, sizes):
        for idx in order[pos:pos + size]:
            tags[int(idx)] = name
        pos += size
    return tags


def _generate_one(args) -> DatasetRecord:
    i, spec = args
    g = gen_random_graph(spec.node_range, spec.target_avg_edges, mix_seed(spec.seed, i), id=f"ge-{i}")
    labels = {k.value: c for k, c in count_all(g, spec.kinds).items()}
    return DatasetRecord(g.replace(targets=labels))


def generate_counting_dataset(spec: GenSpec, threads: int = 1) -> tuple[list[DatasetRecord], dict]:
    """Random graphs labeled with exact counts for every requested kind.

    Graph ``i`` depends only on ``(spec.seed, i)``, so output is the same for
    any ``threads``.
    """
    records = pmap(_generate_one, [(i, spec) for i in range(spec.num_graphs)], threads)
    tags = ratio_split_tags(len(records), spec.split_ratio, spec.seed)
    records = [r.with_split(t) for r, t in zip(records, tags)]
    return records, dataset_stats(records)


def _hist_key(item):
    value = item[0]
    if isinstance(value, (int, float)):
        return (0, value, "")
    return (1, 0, str(value))


def dataset_stats(records: Sequence[DatasetRecord]) -> dict:
    if not records:
        raise ValueError("no records")
    nodes = np.array([r.graph.num_nodes for r in records], dtype=float)
    edges = np.array([r.graph.num_edges for r in records], dtype=float)
    targets: dict[str, list] = {}
    for r in records:
        for name, value in r.y.items():
            targets.setdefault(name, []).append(value)
    per_target = {}
    for name, values in targets.items():
        entry: dict = {"count": len(values)}
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
            arr = np.asarray(values, dtype=float)
            entry["mean"] = float(arr.mean())
            entry["var"] = float(arr.var())
        hashable = [tuple(v) if isinstance(v, list) else v for v in values]
        entry["histogram"] = {str(k): c for k, c in sorted(Counter(hashable).items(), key=_hist_key)}
        per_target[name] = entry
    splits = Counter("none" if r.split is None else str(r.split) for r in records)
    return {
        "graphs": len(records),
        "nodes_mean": float(nodes.mean()),
        "nodes_std": float(nodes.std()),
        "edges_mean": float(edges.mean()),
        "edges_std": float(edges.std()),
        "splits": dict(sorted(splits.items())),
        "targets": per_target,
    }
