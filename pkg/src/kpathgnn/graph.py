"""Immutable undirected simple graphs and the queries built on them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np


class GraphError(ValueError):
    """Raised when input cannot form a valid simple undirected graph."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with optional node features and targets.

    ``adjacency[v]`` is the strictly increasing tuple of neighbours of ``v``.
    Instances should be created through :func:`build_graph`, which enforces
    the invariants; the constructor itself does not re-check them.
    """

    num_nodes: int
    adjacency: tuple[tuple[int, ...], ...]
    features: tuple[tuple[float, ...], ...] | None = None
    targets: Mapping[str, object] = field(default_factory=dict)
    id: str = ""

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        return tuple((u, v) for u in range(self.num_nodes) for v in self.adjacency[u] if u < v)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood of every node as an integer bitmask."""
        out = []
        for nbrs in self.adjacency:
            m = 0
            for u in nbrs:
                m |= 1 << u
            out.append(m)
        return tuple(out)

    @property
    def feature_dim(self) -> int:
        if self.features is None or self.num_nodes == 0:
            return 0
        return len(self.features[0])

    def feature_matrix(self) -> np.ndarray:
        """Dense ``(num_nodes, d_x)`` float array; width 0 when features are absent."""
        if self.features is None:
            return np.zeros((self.num_nodes, 0))
        return np.asarray(self.features, dtype=float).reshape(self.num_nodes, self.feature_dim)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.num_nodes, self.num_nodes), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    def replace(self, **changes) -> "Graph":
        """Copy with some fields swapped; edge changes must go through ``edges=``."""
        edges = changes.pop("edges", None)
        kw = dict(
            num_nodes=self.num_nodes,
            features=self.features,
            targets=self.targets,
            id=self.id,
        )
        kw.update(changes)
        return build_graph(
            kw.pop("num_nodes"),
            self.edges if edges is None else edges,
            **kw,
        )

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the isomorphic graph where node ``v`` becomes ``perm[v]``."""
        n = self.num_nodes
        if sorted(perm) != list(range(n)):
            raise GraphError("perm must be a permutation of range(num_nodes)")
        feats = None
        if self.features is not None:
            rows: list = [None] * n
            for v in range(n):
                rows[perm[v]] = self.features[v]
            feats = rows
        return build_graph(
            n,
            [(perm[u], perm[v]) for u, v in self.edges],
            features=feats,
            targets=self.targets,
            id=self.id,
        )


def build_graph(
    num_nodes: int,
    edges: Iterable[Sequence[int]],
    features: Sequence[Sequence[float]] | np.ndarray | None = None,
    targets: Mapping[str, object] | None = None,
    id: str = "",
) -> Graph:
    """Validate an edge list and return the canonical :class:`Graph`.

    Duplicate edges in either orientation collapse to one.  Self-loops and
    ids outside ``[0, num_nodes)`` raise :class:`GraphError` naming the pair.
    """
    if num_nodes < 0:
        raise GraphError(f"num_nodes must be non-negative, got {num_nodes}")
    nbrs: list[set[int]] = [set() for _ in range(num_nodes)]
    for pair in edges:
        u, v = (int(x) for x in pair)
        if not (0 <= u < num_nodes and 0 <= v < num_nodes):
            raise GraphError(f"edge {(u, v)} has a node id outside [0, {num_nodes})")
        if u == v:
            raise GraphError(f"edge {(u, v)} is a self-loop")
        nbrs[u].add(v)
        nbrs[v].add(u)

    feats = None
    if features is not None:
        rows = [tuple(float(x) for x in row) for row in features]
        if len(rows) != num_nodes:
            raise GraphError(f"features have {len(rows)} rows, expected {num_nodes}")
        if rows and len({len(r) for r in rows}) != 1:
            raise GraphError("feature rows have unequal widths")
        feats = tuple(rows)

    return Graph(
        num_nodes=num_nodes,
        adjacency=tuple(tuple(sorted(s)) for s in nbrs),
        features=feats,
        targets=dict(targets or {}),
        id=id,
    )


def check_invariants(g: Graph) -> None:
    """Direct scan of the structural invariants; raises :class:`GraphError`."""
    for v, nbrs in enumerate(g.adjacency):
        if v in nbrs:
            raise GraphError(f"node {v} lists itself as neighbour")
        if any(a >= b for a, b in zip(nbrs, nbrs[1:])):
            raise GraphError(f"neighbour list of {v} is not strictly increasing")
        for u in nbrs:
            if not 0 <= u < g.num_nodes:
                raise GraphError(f"node {v} has out-of-range neighbour {u}")
            if v not in g.adjacency[u]:
                raise GraphError(f"edge ({v}, {u}) is not symmetric")
    if g.features is not None:
        if len(g.features) != g.num_nodes or len({len(r) for r in g.features}) > 1:
            raise GraphError("feature matrix shape does not match num_nodes")


def _check_node(g: Graph, v: int) -> None:
    if not 0 <= v < g.num_nodes:
        raise GraphError(f"node {v} not in graph with {g.num_nodes} nodes")


def distances_from(g: Graph, v: int, limit: int | None = None) -> dict[int, int]:
    """BFS hop distances from ``v`` (including ``v`` itself at 0), cut at ``limit``."""
    _check_node(g, v)
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        d = dist[u]
        if limit is not None and d >= limit:
            continue
        for w in g.adjacency[u]:
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def neighbors_within(g: Graph, v: int, l: int) -> set[int]:
    """Nodes other than ``v`` at shortest-path distance at most ``l``."""
    if l < 0:
        raise GraphError(f"radius must be non-negative, got {l}")
    dist = distances_from(g, v, limit=l)
    del dist[v]
    return set(dist)


def gen_random_graph(
    node_range: Sequence[int],
    target_avg_edges: float,
    seed: int,
    id: str = "",
) -> Graph:
    """Erdős–Rényi graph whose expected edge count is ``target_avg_edges``.

    The node count is uniform over the inclusive ``node_range``; the edge
    probability is ``target_avg_edges / C(n, 2)`` clamped to ``[0, 1]``.
    Output depends only on the arguments.
    """
    lo, hi = int(node_range[0]), int(node_range[1])
    if lo > hi:
        raise GraphError(f"empty node range [{lo}, {hi}]")
    if lo < 3:
        raise GraphError(f"node range must start at 3 or more, got {lo}")
    rng = np.random.default_rng(seed)
    n = int(rng.integers(lo, hi + 1))
    pairs = comb(n, 2)
    p = min(1.0, max(0.0, target_avg_edges / pairs)) if pairs else 0.0
    draws = rng.random(pairs)
    iu, ju = np.triu_indices(n, k=1)
    keep = draws < p
    return build_graph(n, zip(iu[keep].tolist(), ju[keep].tolist()), id=id)
