from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..seeding import SplitMix64, derive_seed
from .base import Classifier
from .tree import TreeArrays, build_tree


class RandomForest(Classifier):
    """Bagged CART trees with per-split feature subsampling.

    Tree ``t`` draws its bootstrap sample and its feature subsets from
    ``SplitMix64(derive_seed(seed, "rf-tree", t))``, so the forest does not
    depend on ``n_jobs``.  Prediction is a plain majority vote over trees;
    confidence is the winning vote fraction.
    """

    algorithm = "rf"

    def __init__(
        self,
        n_trees: int = 100,
        seed: int = 0,
        max_depth: int | None = 12,
        min_leaf: int = 2,
        max_features="sqrt",
        bootstrap: bool = True,
        tau: float = 0.0,
        n_jobs: int = 1,
    ):
        super().__init__(tau)
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = int(n_trees)
        self.seed = int(seed)
        self.max_depth = max_depth
        self.min_leaf = int(min_leaf)
        self.max_features = max_features
        self.bootstrap = bool(bootstrap)
        self.n_jobs = max(1, int(n_jobs))
        self.trees: list[TreeArrays] = []
        self.tree_seeds: list[int] = []

    def _resolve_max_features(self, d: int) -> int:
        mf = self.max_features
        if mf is None or mf == "all":
            return d
        if mf == "sqrt":
            return max(1, math.ceil(math.sqrt(d)))
        return max(1, min(d, int(mf)))

    def _grow(self, X, y, t):
        tree_seed = derive_seed(self.seed, "rf-tree", t)
        rng = SplitMix64(tree_seed)
        n = len(y)
        if self.bootstrap:
            idx = np.array([rng.randbelow(n) for _ in range(n)], dtype=np.int64)
        else:
            idx = np.arange(n)
        tree = build_tree(
            X[idx],
            y[idx],
            self.n_classes,
            self.max_depth,
            self.min_leaf,
            self._resolve_max_features(X.shape[1]),
            rng,
        )
        return tree_seed, tree

    def _fit(self, X, y):
        if self.n_jobs == 1:
            grown = [self._grow(X, y, t) for t in range(self.n_trees)]
        else:
            with ThreadPoolExecutor(self.n_jobs) as pool:
                grown = list(pool.map(lambda t: self._grow(X, y, t), range(self.n_trees)))
        self.tree_seeds = [s for s, _ in grown]
        self.trees = [t for _, t in grown]

    def _scores(self, X):
        votes = np.zeros((len(X), self.n_classes))
        rows = np.arange(len(X))
        for tree in self.trees:
            leaf_counts = tree.value[tree.apply(X)]
            votes[rows, np.argmax(leaf_counts, axis=1)] += 1
        return votes / len(self.trees)

    def hyperparameters(self):
        return {
            "n_trees": self.n_trees,
            "seed": self.seed,
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "max_features": self.max_features,
            "bootstrap": self.bootstrap,
        }

    def state_dict(self):
        return {
            "trees": [
                {"seed": s, **t.to_dict()} for s, t in zip(self.tree_seeds, self.trees)
            ]
        }

    def load_state(self, state):
        self.tree_seeds = [int(t["seed"]) for t in state["trees"]]
        self.trees = [TreeArrays.from_dict(t) for t in state["trees"]]
