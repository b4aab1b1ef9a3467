"""Exact substructure counting.

Two independent routes are provided:

* brute-force oracles that enumerate simple paths and cycles with
  on-path bitmasks, used as ground truth and to label generated datasets;
* the three-layer message-passing scheme evaluated per k-tuple, in a
  ``literal`` form (the third layer subtracts ``h1(v_j)`` once for every
  neighbour of ``v_j``) and a ``corrected`` form that subtracts it only for
  neighbours outside the tuple.

Conventions: an m-path is a simple path with m edges, counted once per
undirected path in whole-graph totals; an m-cycle is a simple cycle on m
nodes counted once regardless of rotation or direction.  Composite motifs
are counted as (not necessarily induced) subgraphs so every count is
monotone under edge deletion.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Literal, Sequence

from .graph import Graph, GraphError
from .tuples import KTuple, enumerate_k_tuples, is_valid_tuple

Variant = Literal["literal", "corrected"]
VARIANTS = ("literal", "corrected")


class SubstructureKind(str, Enum):
    CYCLE3 = "cycle3"
    CYCLE4 = "cycle4"
    CYCLE5 = "cycle5"
    CYCLE6 = "cycle6"
    CYCLE7 = "cycle7"
    CYCLE8 = "cycle8"
    PATH4 = "path4"
    PATH5 = "path5"
    PATH6 = "path6"
    CLIQUE4 = "clique4"
    TAILED_TRIANGLE = "tailed_triangle"
    CHORDAL_CYCLE = "chordal_cycle"
    TRIANGLE_RECTANGLE = "triangle_rectangle"

    @classmethod
    def parse(cls, name: str) -> "SubstructureKind":
        key = name.strip().lower().replace("-", "_")
        try:
            return KIND_BY_NAME[key]
        except KeyError:
            raise ValueError(f"unknown substructure kind {name!r}; choose from {', '.join(KIND_BY_NAME)}") from None


KIND_BY_NAME = {k.value: k for k in SubstructureKind}
ALL_KINDS = tuple(SubstructureKind)
CYCLE_KINDS = {SubstructureKind[f"CYCLE{m}"]: m for m in range(3, 9)}
PATH_KINDS = {SubstructureKind[f"PATH{m}"]: m for m in range(4, 7)}


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- oracle kernels -------------------------------------------------------


def cycle_counts(g: Graph, max_len: int = 8) -> dict[int, int]:
    """Number of simple cycles of every length 3..max_len.

    Each cycle is found from its smallest node, once per direction.
    """
    masks = g.masks
    found = [0] * (max_len + 1)
    for s in range(g.num_nodes):
        allowed = ~((2 << s) - 1)
        ms = masks[s]
        close = ms & allowed
        stack = [(u, (1 << s) | (1 << u), 2) for u in _bits(close)]
        while stack:
            cur, vis, ln = stack.pop()
            nxt = masks[cur] & allowed & ~vis
            if ln >= 3 and ms >> cur & 1:
                found[ln] += 1
            if ln == max_len - 1:
                # last node must close back to s
                found[max_len] += (nxt & close).bit_count()
            elif ln < max_len:
                for u in _bits(nxt):
                    stack.append((u, vis | (1 << u), ln + 1))
    return {m: found[m] // 2 for m in range(3, max_len + 1)}


def directed_path_counts_from(g: Graph, s: int, max_edges: int) -> list[int]:
    """``out[m]`` = simple paths with m edges starting at ``s``, m <= max_edges."""
    masks = g.masks
    out = [0] * (max_edges + 1)
    out[0] = 1
    if max_edges == 0:
        return out
    stack = [(s, 1 << s, 0)]
    while stack:
        cur, vis, e = stack.pop()
        nxt = masks[cur] & ~vis
        if e == max_edges - 1:
            out[max_edges] += nxt.bit_count()
            continue
        for u in _bits(nxt):
            out[e + 1] += 1
            stack.append((u, vis | (1 << u), e + 1))
    return out


def path_counts(g: Graph, max_edges: int = 6) -> dict[int, int]:
    """Undirected simple paths of every length 1..max_edges."""
    total = [0] * (max_edges + 1)
    for s in range(g.num_nodes):
        for m, c in enumerate(directed_path_counts_from(g, s, max_edges)):
            total[m] += c
    return {m: total[m] // 2 for m in range(1, max_edges + 1)}


def triangles(g: Graph) -> list[int]:
    """Triangles as node bitmasks."""
    masks = g.masks
    out = []
    for u in range(g.num_nodes):
        for v in g.adjacency[u]:
            if v <= u:
                continue
            common = masks[u] & masks[v] & ~((2 << v) - 1)
            for w in _bits(common):
                out.append((1 << u) | (1 << v) | (1 << w))
    return out


def four_cycles(g: Graph) -> list[int]:
    """Every distinct 4-cycle as a node bitmask (a K4 yields three entries).

    Cycle s-a-b-c-s is taken with s its smallest node, b opposite s and a < c.
    """
    masks = g.masks
    out = []
    for s in range(g.num_nodes):
        higher = ~((2 << s) - 1)
        nbrs = [u for u in g.adjacency[s] if u > s]
        for i, a in enumerate(nbrs):
            for c in nbrs[i + 1:]:
                opp = masks[a] & masks[c] & higher
                for b in _bits(opp):
                    out.append((1 << s) | (1 << a) | (1 << b) | (1 << c))
    return out


def clique4_count(g: Graph) -> int:
    masks = g.masks
    total = 0
    for u in range(g.num_nodes):
        for v in g.adjacency[u]:
            if v <= u:
                continue
            common = masks[u] & masks[v] & ~((2 << v) - 1)
            for w in _bits(common):
                total += (common & masks[w] & ~((2 << w) - 1)).bit_count()
    return total


def tailed_triangle_count(g: Graph, tris: Sequence[int] | None = None) -> int:
    """(triangle, pendant edge) pairs: sum over triangle corners of deg - 2."""
    tris = triangles(g) if tris is None else tris
    return sum(g.degree(v) - 2 for t in tris for v in _bits(t))


def chordal_cycle_count(g: Graph) -> int:
    """Diamonds (4-cycle plus one chord): each chord edge with a pair of common neighbours."""
    masks = g.masks
    total = 0
    for u, v in g.edges:
        c = (masks[u] & masks[v]).bit_count()
        total += c * (c - 1) // 2
    return total


def triangle_rectangle_count(g: Graph, tris: Sequence[int] | None = None, quads: Sequence[int] | None = None) -> int:
    """Unordered (triangle, 4-cycle) pairs sharing exactly one node."""
    tris = triangles(g) if tris is None else tris
    quads = four_cycles(g) if quads is None else quads
    return sum(1 for t in tris for q in quads if (t & q).bit_count() == 1)


def count_all(g: Graph, kinds: Iterable[SubstructureKind] = ALL_KINDS) -> dict[SubstructureKind, int]:
    """Oracle counts for several kinds, sharing enumeration work between them."""
    kinds = [SubstructureKind(k) for k in kinds]
    out: dict[SubstructureKind, int] = {}
    cyc = [CYCLE_KINDS[k] for k in kinds if k in CYCLE_KINDS]
    if cyc:
        counts = cycle_counts(g, max(cyc))
        for k in kinds:
            if k in CYCLE_KINDS:
                out[k] = counts[CYCLE_KINDS[k]]
    pth = [PATH_KINDS[k] for k in kinds if k in PATH_KINDS]
    if pth:
        counts = path_counts(g, max(pth))
        for k in kinds:
            if k in PATH_KINDS:
                out[k] = counts[PATH_KINDS[k]]
    tris = None
    if SubstructureKind.TAILED_TRIANGLE in kinds or SubstructureKind.TRIANGLE_RECTANGLE in kinds:
        tris = triangles(g)
    if SubstructureKind.CLIQUE4 in kinds:
        out[SubstructureKind.CLIQUE4] = clique4_count(g)
    if SubstructureKind.TAILED_TRIANGLE in kinds:
        out[SubstructureKind.TAILED_TRIANGLE] = tailed_triangle_count(g, tris)
    if SubstructureKind.CHORDAL_CYCLE in kinds:
        out[SubstructureKind.CHORDAL_CYCLE] = chordal_cycle_count(g)
    if SubstructureKind.TRIANGLE_RECTANGLE in kinds:
        out[SubstructureKind.TRIANGLE_RECTANGLE] = triangle_rectangle_count(g, tris)
    return {k: out[k] for k in kinds}


def oracle_count(g: Graph, kind: SubstructureKind | str) -> int:
    kind = SubstructureKind.parse(kind) if isinstance(kind, str) and not isinstance(kind, SubstructureKind) else kind
    return count_all(g, [kind])[kind]


def oracle_paths_from(g: Graph, v: int, m: int) -> int:
    """Simple paths with exactly ``m`` edges whose first node is ``v``."""
    if not 0 <= v < g.num_nodes:
        raise GraphError(f"node {v} not in graph")
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    return directed_path_counts_from(g, v, m)[m]


def oracle_cycles_at(g: Graph, v: int, m: int) -> int:
    """Distinct simple cycles on ``m`` nodes that pass through ``v``."""
    if not 0 <= v < g.num_nodes:
        raise GraphError(f"node {v} not in graph")
    if m < 3:
        raise ValueError(f"a cycle needs at least 3 nodes, got {m}")
    masks = g.masks
    closing = 0
    stack = [(v, 1 << v, 1)]
    while stack:
        cur, vis, ln = stack.pop()
        if ln == m:
            closing += masks[cur] >> v & 1
            continue
        for u in _bits(masks[cur] & ~vis):
            stack.append((u, vis | (1 << u), ln + 1))
    # every cycle is walked once in each direction
    return closing // 2


# -- message passing ------------------------------------------------------


@dataclass(frozen=True)
class MPState:
    h1: tuple[int, ...]
    h2: tuple[int, ...]
    h3: tuple[int, ...]
    variant: str


def mp_path_vector(g: Graph, t: KTuple | Sequence[int], variant: Variant = "corrected") -> MPState:
    """Three rounds of integer message passing for one k-tuple.

    h1 marks neighbours of the tuple's last node that are not among its first
    k-1 nodes, h2 counts 2-step extensions, h3 counts 3-step extensions
    avoiding the tuple.  With ``corrected``, h3[j] equals the number of
    simple (k+2)-edge paths that run through the tuple and end at j.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    nodes = tuple(t)
    if not is_valid_tuple(g, nodes):
        raise GraphError(f"{nodes} is not a simple path in the graph")
    n = g.num_nodes
    adj = g.adjacency
    last = nodes[-1]
    head = set(nodes[:-1])
    in_t = set(nodes)

    h1 = [0 if j in head else sum(1 for m in adj[j] if m == last) for j in range(n)]
    h2 = [0 if j in in_t else sum(h1[m] for m in adj[j]) for j in range(n)]
    h3 = [0] * n
    for j in range(n):
        if j in in_t:
            continue
        if variant == "literal":
            h3[j] = sum(h2[m] - h1[j] for m in adj[j])
        else:
            outside = sum(1 for m in adj[j] if m not in in_t)
            h3[j] = sum(h2[m] for m in adj[j]) - h1[j] * outside
    return MPState(tuple(h1), tuple(h2), tuple(h3), variant)


def mp_paths_from(g: Graph, v: int, k: int, variant: Variant = "corrected") -> int:
    """Sum of h3 over every node and every simple-path k-tuple rooted at ``v``."""
    return sum(sum(mp_path_vector(g, t, variant).h3) for t in enumerate_k_tuples(g, v, k))


def mp_cycles_raw(g: Graph, v: int, k: int, variant: Variant = "corrected") -> int:
    """Undivided double sum of h3 over tuples at ``v`` and neighbours of ``v``."""
    nbrs = g.adjacency[v]
    total = 0
    for t in enumerate_k_tuples(g, v, k):
        h3 = mp_path_vector(g, t, variant).h3
        total += sum(h3[j] for j in nbrs)
    return total


class CountingInconsistency(ArithmeticError):
    pass


def mp_cycles_at(g: Graph, v: int, k: int, variant: Variant = "corrected") -> int:
    """(k+3)-cycles through ``v``: the neighbour double sum halved for direction."""
    raw = mp_cycles_raw(g, v, k, variant)
    if raw % 2:
        raise CountingInconsistency(f"odd raw cycle sum {raw} at node {v} (k={k}, {variant})")
    return raw // 2


def mp_kind_k(kind: SubstructureKind) -> int:
    """Tuple size the message-passing scheme needs for a path or cycle kind."""
    if kind in CYCLE_KINDS:
        k = CYCLE_KINDS[kind] - 3
    elif kind in PATH_KINDS:
        k = PATH_KINDS[kind] - 2
    else:
        raise ValueError(f"message passing only counts paths and cycles, not {kind.value}")
    if k < 1:
        raise ValueError(f"{kind.value} would need k={k}; message passing requires k >= 1")
    return k


def mp_count(g: Graph, kind: SubstructureKind, variant: Variant = "corrected"):
    """Whole-graph count of a path or cycle kind from per-root message passing.

    Cycle totals divide the per-node double sums by 2m (direction, and the m
    nodes on each cycle); path totals divide the per-root sums by 2.  The
    literal variant can produce non-integers, which are returned as floats.
    """
    k = mp_kind_k(kind)
    if kind in CYCLE_KINDS:
        raw = sum(mp_cycles_raw(g, v, k, variant) for v in range(g.num_nodes))
        den = 2 * CYCLE_KINDS[kind]
    else:
        raw = sum(mp_paths_from(g, v, k, variant) for v in range(g.num_nodes))
        den = 2
    if raw % den == 0:
        return raw // den
    if variant == "corrected":
        raise CountingInconsistency(f"{kind.value} total {raw} not divisible by {den}")
    return raw / den


# -- differential testing -------------------------------------------------

REPORT_COLUMNS = ("graph_id", "root", "k", "oracle", "mp_corrected", "mp_literal", "match_corrected", "match_literal")


@dataclass(frozen=True)
class DiffRow:
    graph_id: str
    root: int
    k: int
    oracle: int
    mp_corrected: float
    mp_literal: float

    @property
    def match_corrected(self) -> bool:
        return self.mp_corrected == self.oracle

    @property
    def match_literal(self) -> bool:
        return self.mp_literal == self.oracle


@dataclass
class DiffReport:
    target: str
    rows: list[DiffRow] = field(default_factory=list)

    @property
    def mismatches_corrected(self) -> int:
        return sum(not r.match_corrected for r in self.rows)

    @property
    def mismatches_literal(self) -> int:
        return sum(not r.match_literal for r in self.rows)

    def summary(self) -> dict:
        n = len(self.rows)
        return {
            "target": self.target,
            "rows": n,
            "mismatches_corrected": self.mismatches_corrected,
            "mismatches_literal": self.mismatches_literal,
            "literal_mismatch_rate": self.mismatches_literal / n if n else 0.0,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for r in self.rows:
            w.writerow([r.graph_id, r.root, r.k, r.oracle, fmt_number(r.mp_corrected), fmt_number(r.mp_literal),
                        int(r.match_corrected), int(r.match_literal)])
        return buf.getvalue()


def fmt_number(x) -> str:
    if isinstance(x, int) or (isinstance(x, float) and x.is_integer()):
        return str(int(x))
    return f"{x:.17g}"


def diff_rows_for_graph(g: Graph, k_set: Sequence[int], target: str = "paths", graph_id: str | None = None) -> list[DiffRow]:
    gid = g.id if graph_id is None else graph_id
    rows = []
    for v in range(g.num_nodes):
        for k in k_set:
            if target == "paths":
                oracle = oracle_paths_from(g, v, k + 2)
                corr = mp_paths_from(g, v, k, "corrected")
                lit = mp_paths_from(g, v, k, "literal")
            elif target == "cycles":
                oracle = oracle_cycles_at(g, v, k + 3)
                corr = mp_cycles_raw(g, v, k, "corrected") / 2
                lit = mp_cycles_raw(g, v, k, "literal") / 2
                corr = int(corr) if corr.is_integer() else corr
                lit = int(lit) if lit.is_integer() else lit
            else:
                raise ValueError(f"unknown target {target!r}")
            rows.append(DiffRow(gid, v, k, oracle, corr, lit))
    return rows


def differential_report(
    g_set: Sequence[Graph],
    k_set: Sequence[int],
    target: str = "paths",
    threads: int = 1,
) -> DiffReport:
    """Oracle vs corrected vs literal message passing for every (graph, root, k).

    Rows follow input graph order, then root, then the given k order; the
    result does not depend on ``threads``.
    """
    from ._parallel import pmap

    report = DiffReport(target)
    jobs = [(g, tuple(k_set), target, g.id or str(i)) for i, g in enumerate(g_set)]
    for rows in pmap(_diff_job, jobs, threads):
        report.rows.extend(rows)
    return report


def _diff_job(args) -> list[DiffRow]:
    g, k_set, target, gid = args
    return diff_rows_for_graph(g, k_set, target, gid)
