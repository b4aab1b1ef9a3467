"""Classification and regression metrics.

Classification works on label *sets* so multi-label data is handled; a
single-label prediction is the one-element set.  ``macro_f1`` uses the
example-based (per-sample averaged) precision and recall; the usual
class-wise macro F1 is reported alongside as ``classwise_macro_f1``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class MetricsReport:
    task: str
    n: int
    acc: float | None = None
    micro_precision: float | None = None
    micro_recall: float | None = None
    micro_f1: float | None = None
    macro_precision: float | None = None
    macro_recall: float | None = None
    macro_f1: float | None = None
    classwise_macro_f1: float | None = None
    mae: float | None = None
    r2: float | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def _as_set(y) -> frozenset:
    if isinstance(y, (set, frozenset, list, tuple)):
        return frozenset(int(c) for c in y)
    return frozenset([int(y)])


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def classification_metrics(preds: Sequence, truths: Sequence) -> MetricsReport:
    if len(preds) != len(truths):
        raise ValueError(f"length mismatch: {len(preds)} predictions vs {len(truths)} truths")
    if not preds:
        raise ValueError("no predictions")
    P = [_as_set(p) for p in preds]
    T = [_as_set(t) for t in truths]
    n = len(P)

    acc = sum(p == t for p, t in zip(P, T)) / n

    inter = sum(len(p & t) for p, t in zip(P, T))
    n_pred = sum(len(p) for p in P)
    n_true = sum(len(t) for t in T)
    mi_p = inter / n_pred if n_pred else 0.0
    mi_r = inter / n_true if n_true else 0.0

    # a sample with an empty predicted (or true) set contributes 0
    ma_p = sum(len(p & t) / len(p) for p, t in zip(P, T) if p) / n
    ma_r = sum(len(p & t) / len(t) for p, t in zip(P, T) if t) / n

    classes = sorted(set().union(*P, *T))
    f1s = []
    for c in classes:
        tp = sum(c in p and c in t for p, t in zip(P, T))
        fp = sum(c in p and c not in t for p, t in zip(P, T))
        fn = sum(c not in p and c in t for p, t in zip(P, T))
        f1s.append(2 * tp / (2 * tp + fp + fn) if tp + fp + fn else 0.0)

    return MetricsReport(
        task="classification",
        n=n,
        acc=acc,
        micro_precision=mi_p,
        micro_recall=mi_r,
        micro_f1=_f1(mi_p, mi_r),
        macro_precision=ma_p,
        macro_recall=ma_r,
        macro_f1=_f1(ma_p, ma_r),
        classwise_macro_f1=float(np.mean(f1s)) if f1s else 0.0,
    )


def mae(preds: Iterable[float], truths: Iterable[float]) -> float:
    p, t = _pair(preds, truths)
    return float(np.mean(np.abs(t - p)))


def r2_score(preds: Iterable[float], truths: Iterable[float]) -> float:
    """1 - SS_res / SS_tot, not clamped: a bad predictor goes negative."""
    p, t = _pair(preds, truths)
    if len(t) < 2:
        raise ValueError("R2 needs at least two samples")
    ss_tot = np.sum((t - t.mean()) ** 2)
    if ss_tot == 0:
        raise ValueError("R2 is undefined for constant truths")
    return float(1.0 - np.sum((t - p) ** 2) / ss_tot)


def _pair(preds, truths) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(list(preds), dtype=float)
    t = np.asarray(list(truths), dtype=float)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.size} predictions vs {t.size} truths")
    if p.size == 0:
        raise ValueError("no predictions")
    return p, t


def regression_metrics(preds: Sequence[float], truths: Sequence[float]) -> MetricsReport:
    return MetricsReport(task="regression", n=len(truths), mae=mae(preds, truths), r2=r2_score(preds, truths))
