"""Degree-based edge dropping for positive view generation.

Edges between high-degree nodes are treated as structurally important and
kept; low-importance edges are dropped with probability up to ``mu``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError
from .seeding import mix_seed


@dataclass(frozen=True)
class EdgeAugPlan:
    edges: tuple[tuple[int, int], ...]
    importance: tuple[float, ...]
    drop_prob: tuple[float, ...] | None = None
    mu: float | None = None


def edge_importance(g: Graph) -> EdgeAugPlan:
    """ln((deg(u) + deg(v)) / 2 + 1) for every edge."""
    if g.num_edges == 0:
        raise GraphError("edge importance is undefined for an edgeless graph")
    imp = tuple(math.log((g.degree(u) + g.degree(v)) / 2 + 1) for u, v in g.edges)
    return EdgeAugPlan(g.edges, imp)


def drop_probabilities(plan: EdgeAugPlan, mu: float) -> EdgeAugPlan:
    """Min-max map importances onto [0, mu], highest importance -> 0.

    When all importances tie the map is 0/0; every edge then gets mu / 2.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    imp = np.asarray(plan.importance, dtype=float)
    hi, lo = imp.max(), imp.min()
    if hi == lo:
        p = np.full(imp.shape, mu / 2)
    else:
        p = mu * (hi - imp) / (hi - lo)
    return EdgeAugPlan(plan.edges, plan.importance, tuple(float(x) for x in p), float(mu))


def make_plan(g: Graph, mu: float) -> EdgeAugPlan:
    return drop_probabilities(edge_importance(g), mu)


def sample_view(g: Graph, plan: EdgeAugPlan, seed: int) -> Graph:
    """Drop each edge independently with its planned probability."""
    if plan.drop_prob is None:
        raise ValueError("plan has no drop probabilities; call drop_probabilities first")
    if tuple(plan.edges) != g.edges:
        raise GraphError("plan does not match the graph's edge set")
    rng = np.random.default_rng(seed)
    u = rng.random(len(plan.edges))
    kept = [e for e, r, p in zip(plan.edges, u, plan.drop_prob) if r >= p]
    return g.replace(edges=kept)


def make_positive_pair(g: Graph, mu: float, seed: int) -> tuple[Graph, Graph]:
    """Two independent views drawn with sub-seeds ``mix_seed(seed, 0|1)``."""
    if g.num_edges == 0:
        return g, g
    plan = make_plan(g, mu)
    return sample_view(g, plan, mix_seed(seed, 0)), sample_view(g, plan, mix_seed(seed, 1))
