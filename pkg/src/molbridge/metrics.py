"""Multi-class evaluation: accuracy and macro precision/recall/F1.

Convention, fixed and tested: any per-class ratio with a zero
denominator is 0, and macro averages run over the full label set, so
classes absent from the evaluated samples drag the macro down rather
than being skipped. The stratified variant filters samples by true
label and averages over the subset classes only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyMatrixError,
    EmptySubsetError,
    IndexOutOfRangeError,
    NoMatchingSamplesError,
)


@dataclass
class ConfusionMatrix:
    """counts[t][p] = number of samples with true class t predicted as p."""

    counts: np.ndarray

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def accumulate(preds: Sequence[int], labels: Sequence[int],
               n_classes: int) -> ConfusionMatrix:
    if len(preds) != len(labels):
        raise ValueError(
            f"{len(preds)} predictions vs {len(labels)} labels")
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    for p, t in zip(preds, labels):
        if not (0 <= t < n_classes and 0 <= p < n_classes):
            raise IndexOutOfRangeError(
                f"class pair ({t}, {p}) outside [0, {n_classes})")
        counts[t, p] += 1
    return ConfusionMatrix(counts)


def _per_class(counts: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    diag = np.diag(counts).astype(np.float64)
    row = counts.sum(axis=1).astype(np.float64)   # true-class totals
    col = counts.sum(axis=0).astype(np.float64)   # predicted totals
    with np.errstate(invalid="ignore", divide="ignore"):
        precision = np.where(col > 0, diag / np.where(col > 0, col, 1), 0.0)
        recall = np.where(row > 0, diag / np.where(row > 0, row, 1), 0.0)
        pr = precision + recall
        f1 = np.where(pr > 0, 2.0 * precision * recall / np.where(pr > 0, pr, 1), 0.0)
    return precision, recall, f1


def macro_metrics(cm: ConfusionMatrix) -> dict[str, float]:
    if cm.total == 0:
        raise EmptyMatrixError("confusion matrix has no samples")
    precision, recall, f1 = _per_class(cm.counts)
    return {
        "accuracy": float(np.trace(cm.counts) / cm.total),
        "macro_precision": float(precision.mean()),
        "macro_recall": float(recall.mean()),
        "macro_f1": float(f1.mean()),
    }


def stratified_metrics(preds: Sequence[int], labels: Sequence[int],
                       n_classes: int,
                       label_subset: Iterable[int]) -> dict[str, float]:
    subset = sorted(set(label_subset))
    if not subset:
        raise EmptySubsetError("label subset is empty")
    for c in subset:
        if not 0 <= c < n_classes:
            raise IndexOutOfRangeError(f"subset class {c} outside [0, {n_classes})")
    keep = [i for i, t in enumerate(labels) if t in set(subset)]
    if not keep:
        raise NoMatchingSamplesError(
            f"no samples with true label in {subset}")
    cm = accumulate([preds[i] for i in keep], [labels[i] for i in keep],
                    n_classes)
    precision, recall, f1 = _per_class(cm.counts)
    idx = np.array(subset)
    return {
        "accuracy": float(np.trace(cm.counts) / cm.total),
        "macro_precision": float(precision[idx].mean()),
        "macro_recall": float(recall[idx].mean()),
        "macro_f1": float(f1[idx].mean()),
    }


def format_metrics(values: dict[str, float]) -> str:
    """key=value lines, one metric per line, fixed key order."""
    keys = ["accuracy", "macro_precision", "macro_recall", "macro_f1"]
    lines = [f"{k}={values[k]:.6f}" for k in keys if k in values]
    lines.extend(f"{k}={v:.6f}" for k, v in values.items() if k not in keys)
    return "\n".join(lines)
