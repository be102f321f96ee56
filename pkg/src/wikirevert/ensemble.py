"""Online bagging ensemble of incremental trees.

Each member receives every sample with a Poisson-distributed weight (zero
skips the sample), approximating bootstrap resampling on a stream. Member
RNGs derive from the ensemble seed plus the tree index, so runs replay
exactly. Ties in the majority vote go to the lower class id, keeping the
detector conservative about flagging reverts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hoeffding import HoeffdingConfig, HoeffdingTree
from .seeds import derive_seed


@dataclass(frozen=True)
class OnlineForestConfig:
    n_trees: int = 10
    poisson_lambda: float = 6.0
    seed: int = 0
    bootstrap: bool = True  # False feeds every tree weight 1 (degenerate mode)
    tree: HoeffdingConfig = HoeffdingConfig()

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be at least 1")
        if self.poisson_lambda <= 0:
            raise ValueError("poisson_lambda must be positive")


class OnlineBaggingForest:
    def __init__(self, config: OnlineForestConfig | None = None, n_classes: int = 2):
        self.config = config or OnlineForestConfig()
        self.n_classes = n_classes
        self.trees = [HoeffdingTree(self.config.tree, n_classes) for _ in range(self.config.n_trees)]
        self._rngs = [
            np.random.default_rng(derive_seed(self.config.seed, "member", i))
            for i in range(self.config.n_trees)
        ]

    def learn(self, x: np.ndarray, y: int) -> None:
        for tree, rng in zip(self.trees, self._rngs):
            weight = rng.poisson(self.config.poisson_lambda) if self.config.bootstrap else 1
            if weight > 0:
                tree.learn(x, y, float(weight))

    def _votes(self, x: np.ndarray) -> np.ndarray | None:
        votes = np.zeros(self.n_classes)
        any_vote = False
        for tree in self.trees:
            pred = tree.predict(x)
            if pred is not None:
                votes[pred] += 1
                any_vote = True
        return votes if any_vote else None

    def predict(self, x: np.ndarray) -> int | None:
        votes = self._votes(x)
        if votes is None:
            return None
        return int(np.argmax(votes))

    def predict_proba(self, x: np.ndarray) -> np.ndarray | None:
        votes = self._votes(x)
        if votes is None:
            return None
        return votes / votes.sum()

    def to_state(self) -> dict:
        return {
            "config": {
                "n_trees": self.config.n_trees,
                "poisson_lambda": self.config.poisson_lambda,
                "seed": self.config.seed,
                "bootstrap": self.config.bootstrap,
                "tree": {
                    "grace_period": self.config.tree.grace_period,
                    "split_confidence": self.config.tree.split_confidence,
                    "tie_threshold": self.config.tree.tie_threshold,
                },
            },
            "n_classes": self.n_classes,
            "members": [tree.to_state() for tree in self.trees],
            "rng_states": [rng.bit_generator.state for rng in self._rngs],
        }

    @classmethod
    def from_state(cls, state: dict) -> "OnlineBaggingForest":
        cfg = state["config"]
        config = OnlineForestConfig(
            n_trees=int(cfg["n_trees"]),
            poisson_lambda=float(cfg["poisson_lambda"]),
            seed=int(cfg["seed"]),
            bootstrap=bool(cfg["bootstrap"]),
            tree=HoeffdingConfig(
                grace_period=int(cfg["tree"]["grace_period"]),
                split_confidence=float(cfg["tree"]["split_confidence"]),
                tie_threshold=float(cfg["tree"]["tie_threshold"]),
            ),
        )
        forest = cls(config, n_classes=int(state["n_classes"]))
        forest.trees = [HoeffdingTree.from_state(s) for s in state["members"]]
        for rng, rng_state in zip(forest._rngs, state["rng_states"]):
            rng.bit_generator.state = rng_state
        return forest
