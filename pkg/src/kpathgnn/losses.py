"""Contrastive, task and consistency losses as plain functions of embeddings/predictions.

Only loss values are computed; there is no autograd here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Literal, Sequence

import numpy as np

# floor applied to probabilities before taking logs
LOG_EPS = 1e-12

Task = Literal["classification", "regression"]


@dataclass(frozen=True)
class Embedding:
    values: np.ndarray
    id: str = ""
    label: Hashable = None


def _vec(x) -> np.ndarray:
    v = np.asarray(x.values if isinstance(x, Embedding) else x, dtype=float).ravel()
    if not np.all(np.isfinite(v)):
        raise ValueError("embedding has non-finite entries")
    return v


def cosine(a, b) -> float:
    a, b = _vec(a), _vec(b)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(np.dot(a, b) / (na * nb))


def similarity(a, b, tau: float = 1.0) -> float:
    """exp(cosine(a, b) / tau)."""
    if tau <= 0:
        raise ValueError(f"temperature must be positive, got {tau}")
    return float(np.exp(cosine(a, b) / tau))


def infonce_loss(pos: tuple, negatives: Sequence = (), tau: float = 1.0) -> float:
    """InfoNCE for one positive pair against a negative set.

    Each of the two views is used as anchor and compared with the other
    view and every negative; the positive term therefore appears twice in
    the denominator and never pairs an embedding with itself.
    """
    h_hat, h_tilde = pos
    num = similarity(h_hat, h_tilde, tau)
    den = 0.0
    for anchor, other in ((h_hat, h_tilde), (h_tilde, h_hat)):
        den += similarity(anchor, other, tau)
        den += sum(similarity(anchor, n, tau) for n in negatives)
    return float(-np.log(num / den))


def sample_negatives(
    index: int,
    labels: Sequence[Hashable],
    count: int,
    rng: np.random.Generator,
    policy: Literal["different-label", "any"] = "different-label",
) -> list[int]:
    """Indices of negatives for item ``index``, drawn without replacement."""
    if policy == "different-label":
        pool = [j for j, y in enumerate(labels) if j != index and y != labels[index]]
    elif policy == "any":
        pool = [j for j in range(len(labels)) if j != index]
    else:
        raise ValueError(f"unknown negative policy {policy!r}")
    if count >= len(pool):
        return pool
    return sorted(rng.choice(pool, size=count, replace=False).tolist())


def _sim_matrix(vectors: list[np.ndarray], tau: float) -> np.ndarray:
    m = np.vstack(vectors)
    norms = np.linalg.norm(m, axis=1)
    if np.any(norms == 0):
        raise ValueError("cosine similarity is undefined for a zero vector")
    unit = m / norms[:, None]
    return np.exp(np.clip(unit @ unit.T, -1.0, 1.0) / tau)


def batch_contrastive_loss(batch: Sequence[tuple], tau: float = 1.0) -> float:
    """Label-aware contrastive loss over a batch of ``(h_hat, h_tilde, label)``.

    Numerator: all four view combinations of every ordered pair of distinct
    same-label graphs, plus each graph's own ``s(h_hat, h_tilde)``.
    Denominator: every ordered pair of distinct view embeddings in the batch.
    """
    if len(batch) < 2:
        raise ValueError("batch contrastive loss needs at least two graphs")
    if tau <= 0:
        raise ValueError(f"temperature must be positive, got {tau}")
    views = []
    for h_hat, h_tilde, _ in batch:
        views.append(_vec(h_hat))
        views.append(_vec(h_tilde))
    s = _sim_matrix(views, tau)
    labels = [b[2] for b in batch]
    b = len(batch)

    num = 0.0
    for i in range(b):
        num += s[2 * i, 2 * i + 1]
        for j in range(b):
            if j != i and labels[j] == labels[i]:
                num += s[2 * i:2 * i + 2, 2 * j:2 * j + 2].sum()
    den = s.sum() - np.trace(s)
    return float(-np.log(num / den))


def _labels(y) -> list[int]:
    if isinstance(y, (set, frozenset, list, tuple)):
        return sorted(int(c) for c in y)
    return [int(y)]


def task_loss(pred, y, task: Task = "classification") -> float:
    """Cross-entropy over the true label set, or l2 distance for real targets."""
    if task == "classification":
        p = np.asarray(pred, dtype=float)
        return float(-sum(np.log(max(p[c], LOG_EPS)) for c in _labels(y)))
    if task == "regression":
        return float(np.linalg.norm(np.atleast_1d(np.asarray(pred, dtype=float) - np.asarray(y, dtype=float))))
    raise ValueError(f"unknown task {task!r}")


def consistency_loss(pred_hat, pred_tilde, y, task: Task = "classification") -> float:
    """Agreement of both augmented views with the original graph's target.

    For regression only over-prediction is penalised, since dropping edges
    can only lower a substructure count.
    """
    if task == "classification":
        ph = np.asarray(pred_hat, dtype=float)
        pt = np.asarray(pred_tilde, dtype=float)
        return float(-sum(np.log(max(ph[c], LOG_EPS)) + np.log(max(pt[c], LOG_EPS)) for c in _labels(y)))
    if task == "regression":
        return float(max(float(pred_hat) - y, 0.0) + max(float(pred_tilde) - y, 0.0))
    raise ValueError(f"unknown task {task!r}")


def pretraining_objective(
    cl_losses: Iterable[float],
    cy_losses: Iterable[float],
) -> float:
    """Batch mean of contrastive plus consistency loss per graph."""
    cl = np.asarray(list(cl_losses), dtype=float)
    cy = np.asarray(list(cy_losses), dtype=float)
    if cl.shape != cy.shape or cl.size == 0:
        raise ValueError("need equal, non-zero numbers of contrastive and consistency terms")
    return float(np.mean(cl + cy))
