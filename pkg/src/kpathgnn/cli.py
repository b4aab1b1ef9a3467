"""Command-line entry point: ``kpath <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Sequence

from . import __version__
from ._parallel import pmap
from .augment import make_positive_pair
from .counting import (
    ALL_KINDS,
    CountingInconsistency,
    SubstructureKind,
    count_all,
    differential_report,
    fmt_number,
    mp_count,
    mp_kind_k,
)
from .datagen import GenSpec, generate_counting_dataset
from .dataset import DatasetError, DatasetRecord, dumps_record, read_dataset, write_dataset
from .graph import GraphError, gen_random_graph
from .metrics import classification_metrics, regression_metrics
from .scenarios import few_shot_subsample, imbalance_subsample, inject_edge_noise
from .seeding import mix_seed
from .tuples import TUPLE_MODES, enumerate_k_tuples, extract_rooted_subgraph

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
METHODS = ("oracle", "mp-literal", "mp-corrected")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _int_pair(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX, got {text!r}") from None
    return lo, hi


def _ratio(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in text.split(":"))
    except ValueError:
        parts = ()
    if len(parts) != 3 or any(p <= 0 for p in parts):
        raise argparse.ArgumentTypeError(f"expected A:B:C with positive integers, got {text!r}")
    return parts  # type: ignore[return-value]


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x]
    except ValueError:
        values = []
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"expected comma-separated positive integers, got {text!r}")
    return values


def _kinds(text: str) -> tuple[SubstructureKind, ...]:
    if text == "all":
        return ALL_KINDS
    try:
        return tuple(SubstructureKind.parse(x) for x in text.split(",") if x)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _kind(text: str) -> SubstructureKind:
    try:
        return SubstructureKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_jsonl(path: str, lines: Sequence[str]) -> None:
    _write_text(path, "".join(line + "\n" for line in lines))


def _threads(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=1, help="worker processes; output does not depend on it")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kpath", description="k-path rooted subgraph counting, augmentation and benchmark tools")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gen", help="generate an oracle-labeled random-graph counting dataset")
    p.add_argument("--kinds", type=_kinds, default=ALL_KINDS, help="comma list of kinds or 'all' (default)")
    p.add_argument("--num", type=int, default=5000, help="number of graphs")
    p.add_argument("--nodes", type=_int_pair, default=(15, 23), metavar="MIN:MAX", help="node count range")
    p.add_argument("--avg-edges", type=float, default=31.34, help="expected edges per graph")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--split", type=_ratio, default=(3, 2, 5), metavar="A:B:C", help="train:valid:test ratio")
    p.add_argument("--out", required=True, help="output JSONL")
    p.add_argument("--stats", help="optional JSON file for dataset statistics")
    _threads(p)

    p = sub.add_parser("count", help="count one substructure kind per graph")
    p.add_argument("--in", dest="inp", required=True, help="dataset JSONL")
    p.add_argument("--kind", type=_kind, required=True)
    p.add_argument("--method", choices=METHODS, default="oracle")
    p.add_argument("--k", type=int, help="tuple size for mp-* methods; must match the kind")
    p.add_argument("--out", required=True, help="output CSV (graph_id,kind,count)")
    _threads(p)

    p = sub.add_parser("tuples", help="dump k-tuple rooted subgraphs with positional features")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--L", dest="L", type=int, default=2, help="hop radius around each tuple node")
    p.add_argument("--mode", choices=TUPLE_MODES, default="simple-path")
    p.add_argument("--out", required=True, help="output JSONL, one subgraph per line")
    _threads(p)

    p = sub.add_parser("augment", help="write two edge-dropped views per graph")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--mu", type=float, default=0.4, help="maximum drop probability")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    _threads(p)

    p = sub.add_parser("metrics", help="score a predictions CSV against a dataset")
    p.add_argument("--pred", required=True, help="CSV rows: id,pred[,pred...]")
    p.add_argument("--in", dest="inp", required=True, help="dataset JSONL with true targets")
    p.add_argument("--task", choices=("classification", "regression"), required=True)
    p.add_argument("--target", default=None, help="target name in y (default: 'label' or the only target)")
    p.add_argument("--out", required=True, help="output metrics JSON")

    p = sub.add_parser("scenario", help="noise / imbalance / few-shot transforms of a dataset")
    p.add_argument("which", choices=("noise", "imbalance", "fewshot"))
    p.add_argument("--alpha", type=float, help="edge-deletion ratio (noise)")
    p.add_argument("--beta", type=float, help="imbalance exponent (imbalance)")
    p.add_argument("--gamma", type=int, help="samples per class or bucket (fewshot)")
    p.add_argument("--target", default=None, help="target name for imbalance/fewshot grouping")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="optional JSON file with per-group subsample counts")

    p = sub.add_parser("diff", help="oracle vs message-passing differential report")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--k", type=_int_list, default=[1], help="comma list of tuple sizes")
    p.add_argument("--target", choices=("paths", "cycles"), default="paths")
    p.add_argument("--out", required=True, help="output CSV")
    _threads(p)

    p = sub.add_parser("bench", help="time oracle labeling and message-passing counting")
    p.add_argument("--num", type=int, default=500)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--nodes", type=_int_pair, default=(15, 23), metavar="MIN:MAX")
    p.add_argument("--avg-edges", type=float, default=31.34)
    p.add_argument("--out", help="optional JSON file with timings")
    return parser


# -- subcommands ----------------------------------------------------------


def cmd_gen(a) -> int:
    try:
        spec = GenSpec(
            kinds=a.kinds,
            num_graphs=a.num,
            node_range=a.nodes,
            target_avg_edges=a.avg_edges,
            seed=a.seed,
            split_ratio=a.split,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    records, stats = generate_counting_dataset(spec, threads=a.threads)
    write_dataset(records, a.out)
    if a.stats:
        _write_text(a.stats, json.dumps(stats, indent=2) + "\n")
    print(f"wrote {len(records)} graphs to {a.out}: mean nodes {stats['nodes_mean']:.2f}, "
          f"mean edges {stats['edges_mean']:.2f}, splits {stats['splits']}")
    return EXIT_OK


def _count_job(args):
    g, kind, method = args
    if method == "oracle":
        return count_all(g, [kind])[kind]
    return mp_count(g, kind, "literal" if method == "mp-literal" else "corrected")


def cmd_count(a) -> int:
    if a.method != "oracle":
        try:
            need = mp_kind_k(a.kind)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if a.k is not None and a.k != need:
            raise UsageError(f"{a.kind.value} needs --k {need} for message passing, got {a.k}")
    records = read_dataset(a.inp)
    values = pmap(_count_job, [(r.graph, a.kind, a.method) for r in records], a.threads)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["graph_id", "kind", "count"])
    for r, v in zip(records, values):
        w.writerow([r.id, a.kind.value, fmt_number(v)])
    _write_text(a.out, buf.getvalue())
    print(f"counted {a.kind.value} on {len(records)} graphs with {a.method}; total {fmt_number(sum(values))}")
    return EXIT_OK


def _tuples_job(args) -> list[str]:
    rec, k, L, mode = args
    g = rec.graph
    lines = []
    for v in range(g.num_nodes):
        for idx, t in enumerate(enumerate_k_tuples(g, v, k, mode)):
            sub = extract_rooted_subgraph(g, t, L)
            local = sub.local_graph.replace(
                id=f"{g.id}#{v}.{idx}",
                features=sub.aug_features.tolist(),
                targets=g.targets,
            )
            lines.append(dumps_record(DatasetRecord(local, rec.split), tuple=list(t.nodes),
                                      node_map=list(sub.node_map)))
    return lines


def cmd_tuples(a) -> int:
    if a.k < 1 or a.L < 0:
        raise UsageError("--k must be >= 1 and --L >= 0")
    records = read_dataset(a.inp)
    chunks = pmap(_tuples_job, [(r, a.k, a.L, a.mode) for r in records], a.threads)
    lines = [line for chunk in chunks for line in chunk]
    _write_jsonl(a.out, lines)
    print(f"wrote {len(lines)} rooted subgraphs (k={a.k}, L={a.L}, {a.mode}) from {len(records)} graphs")
    return EXIT_OK


def _augment_job(args) -> list[str]:
    i, rec, mu, seed = args
    v0, v1 = make_positive_pair(rec.graph, mu, mix_seed(seed, i))
    return [
        dumps_record(DatasetRecord(v0.replace(id=f"{rec.id}#v0"), rec.split)),
        dumps_record(DatasetRecord(v1.replace(id=f"{rec.id}#v1"), rec.split)),
    ]


def cmd_augment(a) -> int:
    if not 0.0 <= a.mu <= 1.0:
        raise UsageError("--mu must lie in [0, 1]")
    records = read_dataset(a.inp)
    chunks = pmap(_augment_job, [(i, r, a.mu, a.seed) for i, r in enumerate(records)], a.threads)
    _write_jsonl(a.out, [line for chunk in chunks for line in chunk])
    print(f"wrote {2 * len(records)} views (mu={a.mu}) to {a.out}")
    return EXIT_OK


def _read_predictions(path: str, task: str) -> dict[str, object]:
    preds: dict[str, object] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (lineno == 1 and row[0].strip().lower() in ("id", "graph_id")):
                continue
            cells = [c.strip() for c in row[1:] if c.strip()]
            try:
                if task == "regression":
                    if len(cells) != 1:
                        raise ValueError("regression rows need exactly one prediction")
                    preds[row[0]] = float(cells[0])
                else:
                    preds[row[0]] = [int(c) for c in cells]
            except ValueError as exc:
                raise DatasetError(f"{path}: {exc}", lineno) from None
    return preds


def cmd_metrics(a) -> int:
    records = read_dataset(a.inp)
    preds = _read_predictions(a.pred, a.task)
    target = a.target
    if target is None:
        names = sorted({n for r in records for n in r.y})
        target = "label" if "label" in names else (names[0] if len(names) == 1 else None)
        if target is None:
            raise UsageError(f"choose --target from {names}")
    p, t = [], []
    for r in records:
        if r.id not in preds:
            raise DatasetError(f"no prediction for graph {r.id!r}")
        if target not in r.y:
            raise DatasetError(f"graph {r.id!r} has no target {target!r}")
        p.append(preds[r.id])
        t.append(r.y[target])
    try:
        if a.task == "classification":
            report = classification_metrics(p, t)
        else:
            report = regression_metrics(p, [float(x) for x in t])
    except ValueError as exc:
        raise DatasetError(str(exc)) from None
    doc = report.as_dict()
    doc["target"] = target
    _write_text(a.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    shown = ", ".join(f"{k}={v:.4f}" for k, v in doc.items() if isinstance(v, float))
    print(f"{a.task} on {report.n} graphs: {shown}")
    return EXIT_OK


def cmd_scenario(a) -> int:
    records = read_dataset(a.inp)
    report = None
    try:
        if a.which == "noise":
            if a.alpha is None:
                raise UsageError("noise needs --alpha")
            out = inject_edge_noise(records, a.alpha, a.seed)
        elif a.which == "imbalance":
            if a.beta is None:
                raise UsageError("imbalance needs --beta")
            out, report = imbalance_subsample(records, a.beta, a.seed, a.target)
        else:
            if a.gamma is None:
                raise UsageError("fewshot needs --gamma")
            out, report = few_shot_subsample(records, a.gamma, a.seed, a.target)
    except UsageError:
        raise
    except ValueError as exc:
        raise DatasetError(str(exc)) from None
    write_dataset(out, a.out)
    if report is not None and a.report:
        _write_text(a.report, json.dumps(report.as_dict(), indent=2, default=str) + "\n")
    msg = f"{a.which}: {len(records)} -> {len(out)} records"
    if report is not None and report.short:
        msg += f"; short groups {report.short}"
    print(msg)
    return EXIT_OK


def cmd_diff(a) -> int:
    records = read_dataset(a.inp)
    report = differential_report([r.graph for r in records], a.k, a.target, threads=a.threads)
    _write_text(a.out, report.to_csv())
    s = report.summary()
    print(f"{s['rows']} rows ({a.target}): corrected mismatches {s['mismatches_corrected']}, "
          f"literal mismatches {s['mismatches_literal']}")
    return EXIT_OK


def cmd_bench(a) -> int:
    graphs = [gen_random_graph(a.nodes, a.avg_edges, mix_seed(a.seed, i)) for i in range(a.num)]
    t0 = time.perf_counter()
    for g in graphs:
        count_all(g)
    t_oracle = time.perf_counter() - t0
    t0 = time.perf_counter()
    for g in graphs:
        mp_count(g, SubstructureKind.CYCLE4)
    t_mp = time.perf_counter() - t0
    rows = {
        "graphs": a.num,
        "oracle_all_kinds_s": t_oracle,
        "oracle_per_graph_ms": 1000 * t_oracle / max(a.num, 1),
        "mp_cycle4_s": t_mp,
        "mp_per_graph_ms": 1000 * t_mp / max(a.num, 1),
    }
    for k, v in rows.items():
        print(f"{k:>22}  {v:.4f}" if isinstance(v, float) else f"{k:>22}  {v}")
    if a.out:
        _write_text(a.out, json.dumps(rows, indent=2) + "\n")
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "count": cmd_count,
    "tuples": cmd_tuples,
    "augment": cmd_augment,
    "metrics": cmd_metrics,
    "scenario": cmd_scenario,
    "diff": cmd_diff,
    "bench": cmd_bench,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except (DatasetError, GraphError, CountingInconsistency, OSError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
