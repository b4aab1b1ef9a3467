"""Evaluation scenarios: edge-deletion noise, imbalance, few-shot, and splits.

Imbalance and few-shot only touch records tagged ``train``; everything else
is passed through untouched and in its original order.  Regression targets
are grouped into equal-width buckets over the training label range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np

from .datagen import ratio_split_tags
from .dataset import DatasetRecord
from .seeding import mix_seed

IMBALANCE_BUCKETS = 3
FEW_SHOT_BUCKETS = 5


@dataclass(frozen=True)
class ScenarioConfig:
    alpha: float = 0.0
    beta: float = 0.0
    gamma: int = 5
    buckets: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.beta < 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")
        if self.gamma < 1:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


@dataclass
class SubsampleReport:
    """Per group: available training samples, requested count, kept count."""

    groups: list[dict] = field(default_factory=list)

    @property
    def short(self) -> list:
        return [g["group"] for g in self.groups if g["short"]]

    def as_dict(self) -> dict:
        return {"groups": self.groups, "short": self.short}


def removal_count(num_edges: int, alpha: float) -> int:
    """round-half-up of alpha * num_edges, computed in decimal to avoid binary drift."""
    exact = Decimal(repr(float(alpha))) * num_edges
    return int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def inject_edge_noise(records: Sequence[DatasetRecord], alpha: float, seed: int) -> list[DatasetRecord]:
    """Delete round(alpha * |E|) uniformly chosen edges from every graph; labels kept."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    out = []
    for i, rec in enumerate(records):
        g = rec.graph
        drop = removal_count(g.num_edges, alpha)
        if drop == 0:
            out.append(rec)
            continue
        rng = np.random.default_rng(mix_seed(seed, i))
        gone = set(rng.choice(g.num_edges, size=drop, replace=False).tolist())
        kept = [e for j, e in enumerate(g.edges) if j not in gone]
        out.append(rec.with_graph(g.replace(edges=kept)))
    return out


def _target_key(records: Sequence[DatasetRecord], key: str | None) -> str:
    if key is not None:
        return key
    names = {name for r in records for name in r.y}
    if "label" in names:
        return "label"
    if len(names) == 1:
        return names.pop()
    raise ValueError(f"ambiguous target, pass one of {sorted(names)}")


def _train_groups(
    records: Sequence[DatasetRecord], key: str, num_buckets: int
) -> tuple[list[int], dict[object, list[int]], str]:
    """Indices of training records grouped by class or by equal-width label bucket."""
    train = [i for i, r in enumerate(records) if r.split == "train"]
    if not train:
        raise ValueError("no records tagged 'train'")
    values = []
    for i in train:
        if key not in records[i].y:
            raise ValueError(f"record {records[i].id!r} has no target {key!r}")
        values.append(records[i].y[key])

    groups: dict[object, list[int]] = {}
    if key == "label":
        for i, v in zip(train, values):
            if isinstance(v, list):
                raise ValueError("imbalance and few-shot need single-label targets")
            groups.setdefault(v, []).append(i)
        return train, dict(sorted(groups.items())), "class"

    lo, hi = float(min(values)), float(max(values))
    width = (hi - lo) / num_buckets
    groups = {b: [] for b in range(num_buckets)}
    for i, v in zip(train, values):
        b = 0 if width == 0 else min(int((float(v) - lo) / width), num_buckets - 1)
        groups[b].append(i)
    return train, groups, "bucket"


def _subsample(
    records: Sequence[DatasetRecord],
    groups: dict[object, list[int]],
    train: list[int],
    wanted: dict[object, int],
    seed: int,
) -> tuple[list[DatasetRecord], SubsampleReport]:
    keep: set[int] = set()
    report = SubsampleReport()
    for g_idx, (group, members) in enumerate(groups.items()):
        want = wanted[group]
        if want >= len(members):
            chosen = members
        else:
            rng = np.random.default_rng(mix_seed(seed, g_idx))
            chosen = [members[j] for j in sorted(rng.choice(len(members), size=want, replace=False).tolist())]
        keep.update(chosen)
        report.groups.append(
            {"group": group, "available": len(members), "requested": want, "kept": len(chosen),
             "short": want > len(members)}
        )
    train_set = set(train)
    return [r for i, r in enumerate(records) if i not in train_set or i in keep], report


def imbalance_subsample(
    records: Sequence[DatasetRecord],
    beta: float,
    seed: int,
    key: str | None = None,
) -> tuple[list[DatasetRecord], SubsampleReport]:
    """Keep floor(n1 / c**beta) training samples of the c-th class (or bucket).

    ``n1`` is the natural size of the first class, which is kept whole.
    """
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    key = _target_key(records, key)
    train, groups, _ = _train_groups(records, key, IMBALANCE_BUCKETS)
    n1 = len(next(iter(groups.values())))
    wanted = {g: math.floor(n1 / (c ** beta)) for c, g in enumerate(groups, start=1)}
    return _subsample(records, groups, train, wanted, seed)


def few_shot_subsample(
    records: Sequence[DatasetRecord],
    gamma: int,
    seed: int,
    key: str | None = None,
) -> tuple[list[DatasetRecord], SubsampleReport]:
    """Keep gamma training samples per class, or per each of five label buckets."""
    if gamma < 1:
        raise ValueError(f"gamma must be positive, got {gamma}")
    key = _target_key(records, key)
    train, groups, _ = _train_groups(records, key, FEW_SHOT_BUCKETS)
    return _subsample(records, groups, train, {g: gamma for g in groups}, seed)


def parse_scheme(scheme: str) -> tuple[str, tuple[int, ...]]:
    """``kfold:10`` or ``ratio:8:1:1``."""
    name, _, rest = scheme.partition(":")
    try:
        nums = tuple(int(x) for x in rest.split(":")) if rest else ()
    except ValueError:
        raise ValueError(f"malformed split scheme {scheme!r}") from None
    if name == "kfold" and len(nums) == 1 and nums[0] >= 2:
        return name, nums
    if name == "ratio" and len(nums) == 3 and all(x > 0 for x in nums):
        return name, nums
    raise ValueError(f"malformed split scheme {scheme!r}; use kfold:K or ratio:A:B:C")


def kfold_tags(n: int, k: int, seed: int) -> list[int]:
    if k < 2:
        raise ValueError("k-fold needs k >= 2")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} records")
    order = np.random.default_rng(mix_seed(seed, 0)).permutation(n)
    tags = [0] * n
    for pos, idx in enumerate(order):
        tags[int(idx)] = pos % k
    return tags


def make_splits(records: Sequence[DatasetRecord], scheme: str, seed: int) -> list[DatasetRecord]:
    """Tag records with fold indices (k-fold) or train/valid/test (ratio)."""
    name, nums = parse_scheme(scheme)
    n = len(records)
    if name == "kfold":
        tags: list = kfold_tags(n, nums[0], seed)
    else:
        tags = ratio_split_tags(n, nums, seed)
    return [r.with_split(t) for r, t in zip(records, tags)]
