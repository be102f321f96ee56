"""Interleaved test-then-train evaluation over a sorted daily-record stream.

For every record: the editor's profile absorbs it, the profile state becomes
the feature vector, the model predicts, the prediction is scored (inside the
configured window, after warmup, and only if the model did not abstain), and
finally the model trains on the sample. Metrics cover scored records only;
model and profile state always advance over the full stream.
"""

from __future__ import annotations

import time
from typing import Protocol, Sequence

import numpy as np

from .metrics import MetricsReport, compute_metrics, empty_report
from .profiles import ProfileStore
from .records import DailyRecord


class StreamModel(Protocol):
    def learn(self, x: np.ndarray, y: int) -> None: ...
    def predict(self, x: np.ndarray) -> int | None: ...
    def predict_proba(self, x: np.ndarray) -> np.ndarray | None: ...


EVAL_WINDOWS = {"all": 0.0, "last90": 0.9, "last10": 0.1, "last20": 0.2}


def window_start(n: int, window: str | tuple[str, float]) -> int:
    """First stream index inside the scoring window."""
    if isinstance(window, tuple):
        kind, fraction = window
        if kind != "last" or not 0.0 < fraction <= 1.0:
            raise ValueError(f"unsupported evaluation window: {window!r}")
    elif window in EVAL_WINDOWS:
        fraction = EVAL_WINDOWS[window]
        if fraction == 0.0:
            return 0
    else:
        raise ValueError(f"unsupported evaluation window: {window!r}")
    return n - int(round(n * fraction))


def check_sorted(records: Sequence[DailyRecord]) -> None:
    for i in range(1, len(records)):
        if records[i].date < records[i - 1].date:
            raise ValueError(f"stream is not timestamp-sorted at index {i}")


def prequential_run(
    records: Sequence[DailyRecord],
    model: StreamModel,
    store: ProfileStore,
    warmup: int = 1,
    eval_window: str | tuple[str, float] = "all",
    trace: list[tuple[int, int, int]] | None = None,
) -> MetricsReport:
    """Test-then-train pass; returns metrics over the scored records.

    `warmup` leading records are never scored (they still train the model).
    `trace`, when provided, collects (index, prediction, truth) for every
    scored record. A window that scores nothing yields a report flagged empty.
    """
    check_sorted(records)
    start = time.perf_counter()
    first_scored = window_start(len(records), eval_window)
    n_classes = getattr(model, "n_classes", 2)
    confusion = np.zeros((n_classes, n_classes), dtype=int)
    for i, record in enumerate(records):
        store.update(record)
        x = store.vector(record.editor_id)
        truth = int(record.revert_label)
        prediction = model.predict(x)
        if i >= warmup and i >= first_scored and prediction is not None:
            confusion[truth, prediction] += 1
            if trace is not None:
                trace.append((i, prediction, truth))
        model.learn(x, truth)
    wall = time.perf_counter() - start
    if confusion.sum() == 0:
        report = empty_report(n_classes)
        report.wall_seconds = wall
        return report
    return compute_metrics(confusion, wall_seconds=wall)
