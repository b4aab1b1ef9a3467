"""k-tuples, rooted subgraphs with positional identifiers, and readouts.

A k-tuple rooted at ``v`` is an ordered simple path of ``k`` nodes starting
at ``v``.  Around each tuple we cut the induced subgraph spanned by the
L-hop neighbourhoods of its nodes and append a length-``k`` one-hot to every
tuple node's features marking its position.  :func:`encode_graph` runs a
fixed sum-aggregation encoder over those subgraphs so that the whole
tuple -> subgraph -> node -> graph pipeline can be exercised without
trainable weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .graph import Graph, GraphError, build_graph, distances_from

TupleMode = Literal["simple-path", "exact-distance"]
ReadoutMode = Literal["sum", "mean", "max"]

TUPLE_MODES = ("simple-path", "exact-distance")
READOUT_MODES = ("sum", "mean", "max")


@dataclass(frozen=True)
class KTuple:
    nodes: tuple[int, ...]

    @property
    def root(self) -> int:
        return self.nodes[0]

    @property
    def k(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    def __getitem__(self, i):
        return self.nodes[i]


def is_valid_tuple(g: Graph, t: Sequence[int]) -> bool:
    nodes = list(t)
    if not nodes or len(set(nodes)) != len(nodes):
        return False
    if not all(0 <= v < g.num_nodes for v in nodes):
        return False
    return all(g.has_edge(a, b) for a, b in zip(nodes, nodes[1:]))


def enumerate_k_tuples(g: Graph, root: int, k: int, mode: TupleMode = "simple-path") -> list[KTuple]:
    """All k-node simple paths from ``root`` in DFS order, ascending neighbour ids.

    ``exact-distance`` keeps only tuples whose j-th node lies at hop
    distance exactly j from the root.  The count grows like ``deg^k``.
    """
    if not 0 <= root < g.num_nodes:
        raise GraphError(f"root {root} not in graph with {g.num_nodes} nodes")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if mode not in TUPLE_MODES:
        raise ValueError(f"unknown tuple mode {mode!r}")
    dist = distances_from(g, root, limit=k) if mode == "exact-distance" else None

    out: list[KTuple] = []
    path = [root]
    on_path = {root}

    def extend() -> None:
        if len(path) == k:
            out.append(KTuple(tuple(path)))
            return
        depth = len(path)
        for u in g.adjacency[path[-1]]:
            if u in on_path:
                continue
            if dist is not None and dist.get(u) != depth:
                continue
            path.append(u)
            on_path.add(u)
            extend()
            on_path.discard(u)
            path.pop()

    extend()
    return out


@dataclass(frozen=True)
class RootedSubgraph:
    local_graph: Graph
    node_map: tuple[int, ...]
    tuple_positions: tuple[int, ...]
    aug_features: np.ndarray


def _positional_features(g: Graph, nodes: Sequence[int], positions: Sequence[int], k: int) -> np.ndarray:
    base = g.feature_matrix()[list(nodes)]
    onehot = np.zeros((len(nodes), k))
    for j, local in enumerate(positions):
        onehot[local, j] = 1.0
    return np.hstack([base, onehot])


def extract_rooted_subgraph(g: Graph, t: KTuple | Sequence[int], L: int | None) -> RootedSubgraph:
    """Induced subgraph on the L-hop neighbourhoods of the tuple nodes.

    ``L=None`` means unbounded radius, i.e. the tuple's connected component.
    Local ids follow ascending original ids.
    """
    nodes_t = tuple(t)
    if not is_valid_tuple(g, nodes_t):
        raise GraphError(f"{nodes_t} is not a simple path in the graph")
    keep: set[int] = set()
    for v in nodes_t:
        keep.update(distances_from(g, v, limit=L))
    node_map = tuple(sorted(keep))
    local = {v: i for i, v in enumerate(node_map)}
    edges = [(local[u], local[v]) for u, v in g.edges if u in local and v in local]
    sub = build_graph(
        len(node_map),
        edges,
        features=None if g.features is None else [g.features[v] for v in node_map],
        id=g.id,
    )
    positions = tuple(local[v] for v in nodes_t)
    return RootedSubgraph(sub, node_map, positions, _positional_features(g, node_map, positions, len(nodes_t)))


def readout(vectors, mode: ReadoutMode = "sum") -> np.ndarray:
    """Elementwise sum, mean or max over a non-empty set of equal-width vectors."""
    if mode not in READOUT_MODES:
        raise ValueError(f"unknown readout mode {mode!r}")
    rows = [np.asarray(v, dtype=float) for v in vectors]
    if not rows:
        raise ValueError("readout of an empty set")
    if len({r.shape for r in rows}) != 1 or rows[0].ndim != 1:
        raise ValueError("readout inputs must be 1-D vectors of equal width")
    stacked = np.vstack(rows)
    if mode == "sum":
        return stacked.sum(axis=0)
    if mode == "mean":
        return stacked.mean(axis=0)
    return stacked.max(axis=0)


def propagate(g: Graph, h: np.ndarray, layers: int) -> np.ndarray:
    """``layers`` rounds of h(v) <- h(v) + sum of neighbour states."""
    a = g.adjacency_matrix().astype(float)
    for _ in range(layers):
        h = h + a @ h
    return h


def encode_graph(
    g: Graph,
    k: int = 1,
    L_sub: int | None = 2,
    L_layers: int = 2,
    readout1: ReadoutMode = "sum",
    readout2: ReadoutMode = "sum",
    mode: TupleMode = "simple-path",
) -> tuple[np.ndarray, np.ndarray]:
    """Parameter-free tuple-subgraph encoder.

    Returns ``(node_embeddings, graph_embedding)`` with width ``d_x + k``.
    A node that roots no k-tuple (possible when ``k > 1``) falls back to its
    own propagated features, computed with all-zero positional channels.
    """
    if k < 1 or L_layers < 1:
        raise ValueError("k and L_layers must be positive")
    if g.num_nodes == 0:
        raise ValueError("cannot encode an empty graph")
    rows = []
    for v in range(g.num_nodes):
        per_tuple = []
        for t in enumerate_k_tuples(g, v, k, mode):
            sub = extract_rooted_subgraph(g, t, L_sub)
            h = propagate(sub.local_graph, sub.aug_features, L_layers)
            per_tuple.append(h[sub.tuple_positions[0]])
        if not per_tuple:
            keep = sorted(distances_from(g, v, limit=L_sub))
            local = {u: i for i, u in enumerate(keep)}
            sub = build_graph(len(keep), [(local[a], local[b]) for a, b in g.edges if a in local and b in local])
            x = np.hstack([g.feature_matrix()[keep], np.zeros((len(keep), k))])
            per_tuple.append(propagate(sub, x, L_layers)[local[v]])
        rows.append(readout(per_tuple, readout1))
    nodes = np.vstack(rows)
    return nodes, readout(list(nodes), readout2)
