"""Binary classification metrics from a confusion matrix.

Rows index the true class, columns the predicted class; class 0 is non-revert,
class 1 is revert. Undefined rates (0/0) are reported as 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class MetricsReport:
    confusion: np.ndarray                # (C, C) ints, rows = truth
    accuracy: float = 0.0
    precision: np.ndarray = field(default_factory=lambda: np.zeros(2))
    recall: np.ndarray = field(default_factory=lambda: np.zeros(2))
    f1: np.ndarray = field(default_factory=lambda: np.zeros(2))
    macro_precision: float = 0.0
    macro_recall: float = 0.0
    macro_f1: float = 0.0
    micro_precision: float = 0.0
    micro_recall: float = 0.0
    micro_f1: float = 0.0
    total: int = 0
    wall_seconds: float = 0.0
    empty: bool = False

    def to_dict(self, include_wall: bool = False) -> dict:
        out = {
            "confusion": [int(v) for v in self.confusion.reshape(-1)],
            "total": int(self.total),
            "empty": self.empty,
            "accuracy": self.accuracy,
            "macro": {
                "precision": self.macro_precision,
                "recall": self.macro_recall,
                "f1": self.macro_f1,
            },
            "micro": {
                "precision": self.micro_precision,
                "recall": self.micro_recall,
                "f1": self.micro_f1,
            },
            "per_class": [
                {
                    "precision": float(self.precision[c]),
                    "recall": float(self.recall[c]),
                    "f1": float(self.f1[c]),
                }
                for c in range(len(self.precision))
            ],
        }
        if include_wall:
            out["wall_seconds"] = self.wall_seconds
        return out


def empty_report(n_classes: int = 2) -> MetricsReport:
    """Report for an evaluation window that scored nothing."""
    return MetricsReport(confusion=np.zeros((n_classes, n_classes), dtype=int), empty=True)


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num, dtype=float)
    np.divide(num, den, out=out, where=den > 0)
    return out


def compute_metrics(confusion: np.ndarray, wall_seconds: float = 0.0) -> MetricsReport:
    """Accuracy, per-class and macro/micro precision/recall/F from counts.

    For single-label classification the pooled (micro) precision and recall
    both collapse to accuracy, which this keeps exactly.
    """
    confusion = np.asarray(confusion)
    if confusion.ndim != 2 or confusion.shape[0] != confusion.shape[1]:
        raise ValueError("confusion matrix must be square")
    if (confusion < 0).any():
        raise ValueError("confusion matrix entries must be non-negative")
    total = int(confusion.sum())
    if total == 0:
        raise ValueError("confusion matrix is empty")

    diag = np.diag(confusion).astype(float)
    predicted = confusion.sum(axis=0).astype(float)
    actual = confusion.sum(axis=1).astype(float)

    precision = _safe_div(diag, predicted)
    recall = _safe_div(diag, actual)
    f1 = _safe_div(2 * precision * recall, precision + recall)

    accuracy = float(diag.sum() / total)
    micro = float(diag.sum() / total)
    return MetricsReport(
        confusion=confusion.astype(int),
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f1=f1,
        macro_precision=float(precision.mean()),
        macro_recall=float(recall.mean()),
        macro_f1=float(f1.mean()),
        micro_precision=micro,
        micro_recall=micro,
        micro_f1=micro,
        total=total,
        wall_seconds=wall_seconds,
    )
