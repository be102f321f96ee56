"""Batch CART decision trees and a bootstrap random forest.

Splits minimize weighted gini impurity; ties resolve to the lowest feature
index and then the lowest threshold, so training is fully deterministic given
the data, the parameters and the seed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .seeds import derive_seed


def gini_impurity(counts: np.ndarray) -> float:
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.dot(p, p))


@dataclass
class TreeNode:
    """One node of a binary decision tree; a leaf has no split."""

    class_counts: np.ndarray
    gini: float
    predicted_class: int
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def n_nodes(self) -> int:
        if self.is_leaf:
            return 1
        return 1 + self.left.n_nodes() + self.right.n_nodes()

    def predict_one(self, x: np.ndarray) -> int:
        node = self
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node.predicted_class

    def to_dict(self) -> dict:
        out: dict = {
            "class_counts": [float(v) for v in self.class_counts],
            "gini": self.gini,
            "predicted_class": int(self.predicted_class),
        }
        if not self.is_leaf:
            out["feature"] = int(self.feature)
            out["threshold"] = float(self.threshold)
            out["left"] = self.left.to_dict()
            out["right"] = self.right.to_dict()
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "TreeNode":
        node = cls(
            class_counts=np.array(obj["class_counts"], dtype=float),
            gini=float(obj["gini"]),
            predicted_class=int(obj["predicted_class"]),
        )
        if "feature" in obj:
            node.feature = int(obj["feature"])
            node.threshold = float(obj["threshold"])
            node.left = cls.from_dict(obj["left"])
            node.right = cls.from_dict(obj["right"])
        return node


def _best_split(
    X: np.ndarray, y: np.ndarray, idx: np.ndarray, features: np.ndarray, n_classes: int
) -> tuple[float, int, float] | None:
    """Highest gini-gain (feature, threshold) over midpoint candidates."""
    ysub = y[idx]
    total = len(idx)
    counts = np.bincount(ysub, minlength=n_classes).astype(float)
    parent_gini = gini_impurity(counts)
    # Zero-gain splits are admissible (an impure node may need a gain-free
    # split before a separating one becomes visible, as in XOR data).
    best_gain = -np.inf
    best: tuple[float, int, float] | None = None
    for f in features:
        xs = X[idx, f]
        order = np.argsort(xs, kind="stable")
        sx = xs[order]
        if sx[0] == sx[-1]:
            continue
        sy = ysub[order]
        onehot = sy[:, None] == np.arange(n_classes)[None, :]
        cum = np.cumsum(onehot, axis=0).astype(float)
        cut = np.nonzero(sx[:-1] < sx[1:])[0]
        left_counts = cum[cut]
        left_n = (cut + 1).astype(float)
        right_counts = counts[None, :] - left_counts
        right_n = total - left_n
        gl = 1.0 - np.sum((left_counts / left_n[:, None]) ** 2, axis=1)
        gr = 1.0 - np.sum((right_counts / right_n[:, None]) ** 2, axis=1)
        gains = parent_gini - (left_n * gl + right_n * gr) / total
        i = int(np.argmax(gains))
        if gains[i] > best_gain:
            best_gain = float(gains[i])
            best = (best_gain, int(f), float((sx[cut[i]] + sx[cut[i] + 1]) / 2.0))
    return best


def train_cart(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int = 2,
    max_depth: int | None = None,
    min_samples_split: int = 2,
    feature_subsample: int | None = None,
    rng: np.random.Generator | None = None,
) -> TreeNode:
    """Grow a gini CART tree with greedy binary splits.

    `feature_subsample` restricts each split search to a random subset of that
    many features (drawn from `rng`); with it unset the search is exhaustive
    and the tree depends on nothing but the data and parameters.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise ValueError("training data must be a non-empty 2-D matrix")
    if len(y) != X.shape[0]:
        raise ValueError("feature matrix and labels disagree on sample count")
    n_features = X.shape[1]
    if feature_subsample is not None and rng is None:
        raise ValueError("feature subsampling requires an rng")

    def leaf(counts: np.ndarray) -> TreeNode:
        return TreeNode(
            class_counts=counts,
            gini=gini_impurity(counts),
            predicted_class=int(np.argmax(counts)),
        )

    def grow(idx: np.ndarray, depth: int) -> TreeNode:
        counts = np.bincount(y[idx], minlength=n_classes).astype(float)
        if (
            (max_depth is not None and depth >= max_depth)
            or len(idx) < min_samples_split
            or np.count_nonzero(counts) < 2
        ):
            return leaf(counts)
        if feature_subsample is not None and feature_subsample < n_features:
            features = np.sort(rng.choice(n_features, size=feature_subsample, replace=False))
        else:
            features = np.arange(n_features)
        found = _best_split(X, y, idx, features, n_classes)
        if found is None:
            return leaf(counts)
        _, f, threshold = found
        mask = X[idx, f] <= threshold
        node = leaf(counts)
        node.feature = f
        node.threshold = threshold
        node.left = grow(idx[mask], depth + 1)
        node.right = grow(idx[~mask], depth + 1)
        return node

    return grow(np.arange(X.shape[0]), 0)


def tree_predict(root: TreeNode, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return np.array([root.predict_one(row) for row in X], dtype=int)


@dataclass
class ForestModel:
    """Bagged CART ensemble with per-split feature subsampling."""

    trees: list[TreeNode]
    n_classes: int = 2
    seed: int = 0
    bootstrap: bool = True
    feature_subsample: str | None = "sqrt"
    n_features: int = 0
    oob_masks: list[np.ndarray] = field(default_factory=list)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        votes = np.zeros((X.shape[0], self.n_classes), dtype=int)
        for tree in self.trees:
            preds = tree_predict(tree, X)
            votes[np.arange(X.shape[0]), preds] += 1
        return np.argmax(votes, axis=1)

    def to_json_dict(self) -> dict:
        return {
            "format": "wikirevert-forest/1",
            "n_classes": self.n_classes,
            "seed": self.seed,
            "bootstrap": self.bootstrap,
            "feature_subsample": self.feature_subsample,
            "n_features": self.n_features,
            "trees": [_tree_to_arrays(t) for t in self.trees],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ForestModel":
        if obj.get("format") != "wikirevert-forest/1":
            raise ValueError("unrecognized forest payload")
        return cls(
            trees=[_tree_from_arrays(t) for t in obj["trees"]],
            n_classes=int(obj["n_classes"]),
            seed=int(obj["seed"]),
            bootstrap=bool(obj["bootstrap"]),
            feature_subsample=obj["feature_subsample"],
            n_features=int(obj["n_features"]),
        )


def _tree_to_arrays(root: TreeNode) -> dict:
    """Flatten a tree into parallel node arrays (preorder indexing)."""
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    counts: list[list[float]] = []

    def visit(node: TreeNode) -> int:
        i = len(feature)
        feature.append(-1 if node.is_leaf else int(node.feature))
        threshold.append(0.0 if node.is_leaf else float(node.threshold))
        left.append(-1)
        right.append(-1)
        counts.append([float(v) for v in node.class_counts])
        if not node.is_leaf:
            left[i] = visit(node.left)
            right[i] = visit(node.right)
        return i

    visit(root)
    return {"feature": feature, "threshold": threshold, "left": left, "right": right, "counts": counts}


def _tree_from_arrays(obj: dict) -> TreeNode:
    def build(i: int) -> TreeNode:
        c = np.array(obj["counts"][i], dtype=float)
        node = TreeNode(class_counts=c, gini=gini_impurity(c), predicted_class=int(np.argmax(c)))
        if obj["feature"][i] >= 0:
            node.feature = int(obj["feature"][i])
            node.threshold = float(obj["threshold"][i])
            node.left = build(obj["left"][i])
            node.right = build(obj["right"][i])
        return node

    return build(0)


def train_forest(
    X: np.ndarray,
    y: np.ndarray,
    n_estimators: int = 500,
    n_classes: int = 2,
    seed: int = 0,
    max_depth: int | None = None,
    min_samples_split: int = 2,
    bootstrap: bool = True,
    feature_subsample: str | None = "sqrt",
) -> ForestModel:
    """Train a seeded, reproducible random forest.

    Each tree sees a bootstrap sample of the full training size (unless
    bootstrap is disabled) and, with feature_subsample="sqrt", examines
    sqrt(d) random features per split.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("training data must be a non-empty 2-D matrix")
    n, d = X.shape
    per_split = max(1, int(math.sqrt(d))) if feature_subsample == "sqrt" else None
    trees: list[TreeNode] = []
    oob_masks: list[np.ndarray] = []
    for t in range(n_estimators):
        rng = np.random.default_rng(derive_seed(seed, "tree", t))
        if bootstrap:
            sample = rng.integers(0, n, size=n)
        else:
            sample = np.arange(n)
        oob = np.ones(n, dtype=bool)
        oob[sample] = False
        oob_masks.append(oob)
        trees.append(
            train_cart(
                X[sample],
                y[sample],
                n_classes=n_classes,
                max_depth=max_depth,
                min_samples_split=min_samples_split,
                feature_subsample=per_split,
                rng=rng,
            )
        )
    return ForestModel(
        trees=trees,
        n_classes=n_classes,
        seed=seed,
        bootstrap=bootstrap,
        feature_subsample=feature_subsample,
        n_features=d,
        oob_masks=oob_masks,
    )


def oob_accuracy(forest: ForestModel, X: np.ndarray, y: np.ndarray) -> float:
    """Accuracy of out-of-bag majority votes; samples with no vote are skipped."""
    if not forest.oob_masks:
        raise ValueError("forest was not trained with bootstrap bookkeeping")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    votes = np.zeros((X.shape[0], forest.n_classes), dtype=int)
    for tree, oob in zip(forest.trees, forest.oob_masks):
        if not oob.any():
            continue
        preds = tree_predict(tree, X[oob])
        votes[np.nonzero(oob)[0], preds] += 1
    covered = votes.sum(axis=1) > 0
    if not covered.any():
        raise ValueError("no sample was ever out of bag")
    return float(np.mean(np.argmax(votes[covered], axis=1) == y[covered]))


def feature_importance(forest: ForestModel) -> np.ndarray:
    """Mean decrease in gini impurity per feature, normalized to sum to 1.

    When no tree ever split (pure data), the raw importances are all zero;
    that vector is returned unnormalized with a warning.
    """
    d = forest.n_features
    acc = np.zeros(d)
    for root in forest.trees:
        imp = np.zeros(d)
        stack = [root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                continue
            n = node.class_counts.sum()
            n_l = node.left.class_counts.sum()
            n_r = node.right.class_counts.sum()
            imp[node.feature] += n * node.gini - n_l * node.left.gini - n_r * node.right.gini
            stack.append(node.left)
            stack.append(node.right)
        acc += imp
    acc /= max(1, len(forest.trees))
    total = acc.sum()
    if total <= 0:
        warnings.warn("no split in any tree; importances are all zero", RuntimeWarning)
        return acc
    return acc / total
