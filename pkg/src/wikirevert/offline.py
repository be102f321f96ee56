"""Offline feature analysis and batch baselines.

Spearman rank correlation for feature screening, batch Gaussian naive Bayes
and a ridge classifier as interpretable baselines, importance-threshold
feature selection on top of the forest, and a k-fold evaluation driver.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .metrics import MetricsReport, compute_metrics
from .seeds import derive_seed


@dataclass(frozen=True)
class SpearmanResult:
    coefficient: float
    n: int


def rank_mean_ties(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of their positions."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> SpearmanResult:
    """Rank correlation: the product-moment formula applied to mean-tie ranks.

    Raises on mismatched lengths, fewer than two samples, or a constant input
    (the rank variance in the denominator would vanish).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be 1-D sequences of equal length")
    n = len(x)
    if n < 2:
        raise ValueError("need at least two samples")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ValueError("correlation undefined for constant input")
    rx = rank_mean_ties(x)
    ry = rank_mean_ties(y)
    num = n * np.dot(rx, ry) - rx.sum() * ry.sum()
    den = np.sqrt(n * np.dot(rx, rx) - rx.sum() ** 2) * np.sqrt(n * np.dot(ry, ry) - ry.sum() ** 2)
    coeff = float(num / den)
    return SpearmanResult(coefficient=min(1.0, max(-1.0, coeff)), n=n)


# -- batch Gaussian naive Bayes ----------------------------------------------

class BatchGaussianNB:
    """Gaussian naive Bayes fit in one pass with batch moments."""

    def __init__(self, n_classes: int = 2, var_floor: float = 1e-9):
        self.n_classes = n_classes
        self.var_floor = var_floor
        self.priors: np.ndarray | None = None
        self.means: np.ndarray | None = None
        self.variances: np.ndarray | None = None

    def fit(self, X: np.ndarray, y: np.ndarray) -> "BatchGaussianNB":
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.asarray(y, dtype=int)
        if X.shape[0] == 0:
            raise ValueError("cannot fit on an empty dataset")
        counts = np.bincount(y, minlength=self.n_classes).astype(float)
        d = X.shape[1]
        means = np.zeros((self.n_classes, d))
        variances = np.full((self.n_classes, d), self.var_floor)
        for c in range(self.n_classes):
            rows = X[y == c]
            if len(rows):
                means[c] = rows.mean(axis=0)
                variances[c] = np.maximum(rows.var(axis=0), self.var_floor)
        self.priors = counts / counts.sum()
        self.means = means
        self.variances = variances
        return self

    def log_posterior(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.full(self.n_classes, -np.inf)
        for c in range(self.n_classes):
            if self.priors[c] <= 0:
                continue
            var = self.variances[c]
            ll = -0.5 * np.sum(np.log(2 * np.pi * var) + (x - self.means[c]) ** 2 / var)
            out[c] = np.log(self.priors[c]) + ll
        return out

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.array([int(np.argmax(self.log_posterior(row))) for row in X])


# -- ridge classifier ----------------------------------------------------------

@dataclass
class RidgeModel:
    """L2-regularized least squares on targets in {-1, +1}; sign decides."""

    weights: np.ndarray
    intercept: float
    alpha: float

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X @ self.weights + self.intercept

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(int)

    def to_json_dict(self) -> dict:
        return {
            "format": "wikirevert-ridge/1",
            "weights": [float(w) for w in self.weights],
            "intercept": self.intercept,
            "alpha": self.alpha,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "RidgeModel":
        if obj.get("format") != "wikirevert-ridge/1":
            raise ValueError("unrecognized ridge payload")
        return cls(np.array(obj["weights"], dtype=float), float(obj["intercept"]), float(obj["alpha"]))


def train_ridge(X: np.ndarray, y: np.ndarray, alpha: float = 1.0) -> RidgeModel:
    """Solve the regularized normal equations; the intercept is unregularized.

    Labels must contain both classes (0/1, mapped internally to -1/+1). A
    numerically singular system gets one retry with a tiny diagonal jitter.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=int)
    if X.shape[0] == 0:
        raise ValueError("cannot fit on an empty dataset")
    if len(np.unique(y)) < 2:
        raise ValueError("training labels must contain both classes")
    targets = 2.0 * y - 1.0
    n, d = X.shape
    ones = np.ones(n)
    system = np.zeros((d + 1, d + 1))
    system[:d, :d] = X.T @ X + alpha * np.eye(d)
    system[:d, d] = X.T @ ones
    system[d, :d] = ones @ X
    system[d, d] = n
    rhs = np.concatenate([X.T @ targets, [targets.sum()]])
    try:
        solution = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError:
        try:
            solution = np.linalg.solve(system + 1e-12 * np.eye(d + 1), rhs)
        except np.linalg.LinAlgError as exc:
            raise ValueError("normal equations are singular") from exc
    return RidgeModel(weights=solution[:d], intercept=float(solution[d]), alpha=alpha)


# -- feature selection ----------------------------------------------------------

def select_features(importances: np.ndarray, threshold: float | None = None) -> np.ndarray:
    """Keep feature i iff importance[i] >= threshold (default: the mean)."""
    importances = np.asarray(importances, dtype=float)
    if threshold is None:
        threshold = float(importances.mean()) if len(importances) else 0.0
    return importances >= threshold


def selection_subset(y: np.ndarray, majority_cap: int, seed: int = 0) -> np.ndarray:
    """Indices keeping every minority (revert) sample and at most
    `majority_cap` uniformly subsampled majority samples."""
    y = np.asarray(y, dtype=int)
    minority = np.nonzero(y == 1)[0]
    majority = np.nonzero(y == 0)[0]
    if len(majority) > majority_cap:
        rng = np.random.default_rng(derive_seed(seed, "selection-subsample"))
        majority = np.sort(rng.choice(majority, size=majority_cap, replace=False))
    return np.sort(np.concatenate([minority, majority]))


# -- evaluation drivers ----------------------------------------------------------

FitFn = Callable[[np.ndarray, np.ndarray], object]


def batch_metrics_run(
    fit: FitFn,
    X_train: np.ndarray,
    y_train: np.ndarray,
    X_test: np.ndarray,
    y_test: np.ndarray,
    n_classes: int = 2,
) -> MetricsReport:
    """Fit on the training split, evaluate on the held-out one."""
    start = time.perf_counter()
    model = fit(np.asarray(X_train, dtype=float), np.asarray(y_train, dtype=int))
    preds = np.asarray(model.predict(np.asarray(X_test, dtype=float)), dtype=int)
    confusion = np.zeros((n_classes, n_classes), dtype=int)
    for truth, pred in zip(np.asarray(y_test, dtype=int), preds):
        confusion[truth, pred] += 1
    return compute_metrics(confusion, wall_seconds=time.perf_counter() - start)


def kfold_runs(
    fit: FitFn,
    X: np.ndarray,
    y: np.ndarray,
    k: int = 10,
    dates: Sequence | None = None,
    seed: int = 0,
    n_classes: int = 2,
) -> list[MetricsReport]:
    """k disjoint test folds; chronological blocks when dates are available
    (avoids leaking future data into training), seeded shuffle otherwise."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=int)
    n = X.shape[0]
    if k < 2 or k > n:
        raise ValueError(f"fold count must lie in [2, {n}]")
    if dates is not None:
        order = np.argsort(np.asarray(dates), kind="stable")
    else:
        order = np.random.default_rng(derive_seed(seed, "kfold")).permutation(n)
    folds = np.array_split(order, k)
    reports = []
    for fold in folds:
        mask = np.ones(n, dtype=bool)
        mask[fold] = False
        reports.append(
            batch_metrics_run(fit, X[mask], y[mask], X[fold], y[fold], n_classes=n_classes)
        )
    return reports
