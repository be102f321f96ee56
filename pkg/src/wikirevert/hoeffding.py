"""Incremental decision tree for streams (very-fast-decision-tree style).

Leaves accumulate per-class Gaussian summaries per numeric feature. Every
`grace_period` examples a leaf compares its best and second-best candidate
splits; it splits when the gain margin beats the Hoeffding bound
sqrt(R^2 ln(1/delta) / 2n) or when the bound itself drops below the tie
threshold. Candidate thresholds sit at midpoints between per-class means,
and child class distributions are seeded from the Gaussian tail estimates so
fresh leaves predict sensibly straight away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .trees import TreeNode, gini_impurity

_SIGMA2_MIN = 1e-24


@dataclass(frozen=True)
class HoeffdingConfig:
    grace_period: int = 200
    split_confidence: float = 1e-7
    tie_threshold: float = 0.05

    def __post_init__(self):
        if self.grace_period < 1:
            raise ValueError("grace_period must be at least 1")
        if not 0.0 < self.split_confidence < 1.0:
            raise ValueError("split_confidence must lie in (0, 1)")


def hoeffding_bound(value_range: float, confidence: float, n: float) -> float:
    """Margin below which the observed best/second-best gap is inconclusive."""
    return math.sqrt(value_range * value_range * math.log(1.0 / confidence) / (2.0 * n))


class _Node:
    __slots__ = ("counts", "obs", "mean", "m2", "since_eval", "feature", "threshold", "left", "right")

    def __init__(self, n_classes: int, n_features: int, counts: np.ndarray | None = None):
        self.counts = np.zeros(n_classes) if counts is None else counts
        self.obs = np.zeros(n_classes)
        self.mean = np.zeros((n_classes, n_features))
        self.m2 = np.zeros((n_classes, n_features))
        self.since_eval = 0.0
        self.feature: int | None = None
        self.threshold: float = 0.0
        self.left: "_Node | None" = None
        self.right: "_Node | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


class HoeffdingTree:
    def __init__(self, config: HoeffdingConfig | None = None, n_classes: int = 2):
        self.config = config or HoeffdingConfig()
        self.n_classes = n_classes
        self.n_features: int | None = None
        self.root: _Node | None = None

    # -- learning -------------------------------------------------------------

    def learn(self, x: np.ndarray, y: int, weight: float = 1.0) -> None:
        x = np.asarray(x, dtype=float)
        if self.root is None:
            self.n_features = len(x)
            self.root = _Node(self.n_classes, self.n_features)
        elif len(x) != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {len(x)}")
        leaf = self._sort(x)
        leaf.counts[y] += weight
        leaf.obs[y] += weight
        delta = x - leaf.mean[y]
        leaf.mean[y] += weight * delta / leaf.obs[y]
        leaf.m2[y] += weight * delta * (x - leaf.mean[y])
        leaf.since_eval += weight
        if leaf.since_eval >= self.config.grace_period:
            leaf.since_eval = 0.0
            self._attempt_split(leaf)

    def _sort(self, x: np.ndarray) -> _Node:
        node = self.root
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node

    @staticmethod
    def _left_mass(
        obs: np.ndarray, mean: np.ndarray, m2: np.ndarray, thresholds: np.ndarray
    ) -> np.ndarray:
        """Estimated per-class weight falling at or left of each threshold.

        obs is (C,) active-class weights; mean/m2 are (C, D); thresholds is
        (D,). A class whose variance collapsed contributes a step function.
        """
        sigma2 = m2 / obs[:, None]
        spread = sigma2 > _SIGMA2_MIN
        z = (thresholds[None, :] - mean) / np.sqrt(np.where(spread, sigma2, 1.0))
        fraction = np.where(spread, ndtr(z), mean <= thresholds[None, :])
        return obs[:, None] * fraction

    def _split_gains(self, leaf: _Node) -> tuple[np.ndarray, np.ndarray] | None:
        """Per-feature best gini gain and its threshold, evaluated at class-mean
        midpoints using the Gaussian summaries. None when under two classes."""
        active = np.nonzero(leaf.obs > 0)[0]
        if len(active) < 2:
            return None
        obs = leaf.obs[active]
        mean = leaf.mean[active]
        m2 = leaf.m2[active]
        n = obs.sum()
        g0 = gini_impurity(obs)

        order = np.sort(mean, axis=0)                      # (C_active, D)
        midpoints = (order[:-1] + order[1:]) / 2.0         # candidate rows, ascending
        degenerate = order[:-1] == order[1:]               # equal means: no real cut

        best_gain = np.full(self.n_features, -np.inf)
        best_thr = np.zeros(self.n_features)
        for row in range(midpoints.shape[0]):
            thresholds = midpoints[row]
            left = self._left_mass(obs, mean, m2, thresholds)
            left_total = left.sum(axis=0)
            right = obs[:, None] - left
            right_total = n - left_total
            with np.errstate(invalid="ignore", divide="ignore"):
                gl = 1.0 - np.sum((left / np.maximum(left_total, 1e-300)) ** 2, axis=0)
                gr = 1.0 - np.sum((right / np.maximum(right_total, 1e-300)) ** 2, axis=0)
            gains = g0 - (left_total * gl + right_total * gr) / n
            gains[degenerate[row]] = -np.inf
            better = gains > best_gain   # strict: earlier (lower) midpoints win ties
            best_gain[better] = gains[better]
            best_thr[better] = thresholds[better]
        return best_gain, best_thr

    def _attempt_split(self, leaf: _Node) -> None:
        n = leaf.obs.sum()
        if n <= 0:
            return
        evaluated = self._split_gains(leaf)
        if evaluated is None:
            return
        gains, thresholds = evaluated
        f1 = int(np.argmax(gains))
        g1 = gains[f1]
        if not g1 > 0.0:
            return
        # Runner-up is the best other feature, floored at the no-split option.
        others = np.delete(gains, f1)
        g2 = max(0.0, float(others.max())) if len(others) else 0.0
        epsilon = hoeffding_bound(
            math.log2(self.n_classes), self.config.split_confidence, n
        )
        if not (g1 - g2 > epsilon or epsilon < self.config.tie_threshold):
            return
        t1 = float(thresholds[f1])
        active = np.nonzero(leaf.obs > 0)[0]
        left_active = self._left_mass(
            leaf.obs[active],
            leaf.mean[active][:, [f1]],
            leaf.m2[active][:, [f1]],
            np.array([t1]),
        )[:, 0]
        left_counts = np.zeros(self.n_classes)
        left_counts[active] = left_active
        right_counts = leaf.obs - left_counts
        leaf.feature = f1
        leaf.threshold = t1
        leaf.left = _Node(self.n_classes, self.n_features, counts=left_counts)
        leaf.right = _Node(self.n_classes, self.n_features, counts=right_counts)
        leaf.mean = leaf.m2 = None  # observers are no longer needed

    # -- prediction -------------------------------------------------------------

    def _counts_at(self, x: np.ndarray) -> np.ndarray | None:
        if self.root is None:
            return None
        node = self.root
        fallback = None
        while True:
            if node.counts.sum() > 0:
                fallback = node.counts
            if node.is_leaf:
                break
            node = node.left if x[node.feature] <= node.threshold else node.right
        return fallback

    def predict(self, x: np.ndarray) -> int | None:
        counts = self._counts_at(np.asarray(x, dtype=float))
        if counts is None:
            return None
        return int(np.argmax(counts))

    def predict_proba(self, x: np.ndarray) -> np.ndarray | None:
        counts = self._counts_at(np.asarray(x, dtype=float))
        if counts is None:
            return None
        return counts / counts.sum()

    # -- introspection ------------------------------------------------------------

    def n_nodes(self) -> int:
        if self.root is None:
            return 0
        count, stack = 0, [self.root]
        while stack:
            node = stack.pop()
            count += 1
            if not node.is_leaf:
                stack.extend((node.left, node.right))
        return count

    def as_tree_node(self) -> TreeNode:
        """Immutable structural snapshot for explanation and export."""
        if self.root is None:
            raise ValueError("tree has not been trained")

        def convert(node: _Node) -> TreeNode:
            out = TreeNode(
                class_counts=node.counts.copy(),
                gini=gini_impurity(node.counts),
                predicted_class=int(np.argmax(node.counts)),
            )
            if not node.is_leaf:
                out.feature = node.feature
                out.threshold = node.threshold
                out.left = convert(node.left)
                out.right = convert(node.right)
            return out

        return convert(self.root)

    # -- persistence -------------------------------------------------------------

    def to_state(self) -> dict:
        def encode(node: _Node) -> dict:
            if node.is_leaf:
                return {
                    "counts": node.counts.tolist(),
                    "obs": node.obs.tolist(),
                    "mean": node.mean.tolist(),
                    "m2": node.m2.tolist(),
                    "since_eval": node.since_eval,
                }
            return {
                "counts": node.counts.tolist(),
                "feature": node.feature,
                "threshold": node.threshold,
                "left": encode(node.left),
                "right": encode(node.right),
            }

        return {
            "config": {
                "grace_period": self.config.grace_period,
                "split_confidence": self.config.split_confidence,
                "tie_threshold": self.config.tie_threshold,
            },
            "n_classes": self.n_classes,
            "n_features": self.n_features,
            "root": None if self.root is None else encode(self.root),
        }

    @classmethod
    def from_state(cls, state: dict) -> "HoeffdingTree":
        cfg = state["config"]
        tree = cls(
            HoeffdingConfig(
                grace_period=int(cfg["grace_period"]),
                split_confidence=float(cfg["split_confidence"]),
                tie_threshold=float(cfg["tie_threshold"]),
            ),
            n_classes=int(state["n_classes"]),
        )
        tree.n_features = state["n_features"]

        def decode(obj: dict) -> _Node:
            node = _Node(tree.n_classes, tree.n_features or 0, counts=np.array(obj["counts"]))
            if "feature" in obj:
                node.feature = int(obj["feature"])
                node.threshold = float(obj["threshold"])
                node.left = decode(obj["left"])
                node.right = decode(obj["right"])
                node.mean = node.m2 = None
            else:
                node.obs = np.array(obj["obs"], dtype=float)
                node.mean = np.array(obj["mean"], dtype=float)
                node.m2 = np.array(obj["m2"], dtype=float)
                node.since_eval = float(obj["since_eval"])
            return node

        if state["root"] is not None:
            tree.root = decode(state["root"])
        return tree
