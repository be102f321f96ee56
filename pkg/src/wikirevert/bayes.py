"""Incremental Gaussian naive Bayes for the stream stage.

Dense slots get per-class running mean/variance (Welford updates, population
variance, floored at 1e-9). Slots at and beyond `dense_dim` are treated as
token counts under a multinomial likelihood with add-one smoothing, combined
additively with the Gaussian block in log space. Before any training example
the model abstains (predict returns None).
"""

from __future__ import annotations

import numpy as np


class IncrementalNaiveBayes:
    def __init__(self, n_classes: int = 2, dense_dim: int | None = None, var_floor: float = 1e-9):
        self.n_classes = n_classes
        self.dense_dim = dense_dim
        self.var_floor = var_floor
        self.class_weight = np.zeros(n_classes)
        self.means: np.ndarray | None = None
        self.m2: np.ndarray | None = None
        self.token_counts: np.ndarray | None = None
        self.n_features: int | None = None

    def _allocate(self, n_features: int) -> None:
        self.n_features = n_features
        dense = n_features if self.dense_dim is None else min(self.dense_dim, n_features)
        self._dense = dense
        self.means = np.zeros((self.n_classes, dense))
        self.m2 = np.zeros((self.n_classes, dense))
        self.token_counts = np.zeros((self.n_classes, n_features - dense))

    def learn(self, x: np.ndarray, y: int, weight: float = 1.0) -> None:
        x = np.asarray(x, dtype=float)
        if self.n_features is None:
            self._allocate(len(x))
        elif len(x) != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {len(x)}")
        self.class_weight[y] += weight
        dense = x[: self._dense]
        delta = dense - self.means[y]
        self.means[y] += weight * delta / self.class_weight[y]
        self.m2[y] += weight * delta * (dense - self.means[y])
        if self.token_counts.shape[1]:
            self.token_counts[y] += weight * x[self._dense :]

    def _log_posterior(self, x: np.ndarray) -> np.ndarray | None:
        if self.n_features is None or self.class_weight.sum() <= 0:
            return None
        x = np.asarray(x, dtype=float)
        total = self.class_weight.sum()
        out = np.full(self.n_classes, -np.inf)
        dense = x[: self._dense]
        sparse = x[self._dense :]
        vocab = self.token_counts.shape[1]
        for c in range(self.n_classes):
            if self.class_weight[c] <= 0:
                continue
            var = np.maximum(self.m2[c] / self.class_weight[c], self.var_floor)
            score = np.log(self.class_weight[c] / total)
            score += -0.5 * np.sum(np.log(2 * np.pi * var) + (dense - self.means[c]) ** 2 / var)
            if vocab:
                log_probs = np.log(self.token_counts[c] + 1.0) - np.log(
                    self.token_counts[c].sum() + vocab
                )
                score += float(sparse @ log_probs)
            out[c] = score
        return out

    def predict(self, x: np.ndarray) -> int | None:
        scores = self._log_posterior(x)
        if scores is None:
            return None
        return int(np.argmax(scores))

    def predict_proba(self, x: np.ndarray) -> np.ndarray | None:
        scores = self._log_posterior(x)
        if scores is None:
            return None
        shifted = scores - scores.max()
        probs = np.exp(shifted)
        return probs / probs.sum()

    def to_state(self) -> dict:
        return {
            "n_classes": self.n_classes,
            "dense_dim": self.dense_dim,
            "var_floor": self.var_floor,
            "n_features": self.n_features,
            "class_weight": self.class_weight.tolist(),
            "means": None if self.means is None else self.means.tolist(),
            "m2": None if self.m2 is None else self.m2.tolist(),
            "token_counts": None if self.token_counts is None else self.token_counts.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict) -> "IncrementalNaiveBayes":
        model = cls(
            n_classes=int(state["n_classes"]),
            dense_dim=state["dense_dim"],
            var_floor=float(state["var_floor"]),
        )
        model.class_weight = np.array(state["class_weight"], dtype=float)
        if state["n_features"] is not None:
            model._allocate(int(state["n_features"]))
            model.means = np.array(state["means"], dtype=float)
            model.m2 = np.array(state["m2"], dtype=float)
            model.token_counts = np.array(state["token_counts"], dtype=float)
        return model
