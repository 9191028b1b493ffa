"""CART decision tree with Gini impurity.

Nodes are stored in flat arrays (preorder).  A split sends ``x[f] <= t`` to
the left child.  The best split is found by an exhaustive scan over the
candidate features and the midpoints between consecutive distinct values;
impurity ties keep the lower feature index, then the lower threshold.
Zero-gain splits are allowed, so an impure node is split whenever some
candidate feature still varies (this is what lets XOR-like data be fitted).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import Classifier

TIE_TOL = 1e-12


@dataclass
class TreeArrays:
    feature: np.ndarray  # -1 marks a leaf
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # per-node class counts, (n_nodes, n_classes)

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def n_internal(self) -> int:
        return int(np.sum(self.feature >= 0))

    def depth(self) -> int:
        def walk(node):
            if self.feature[node] < 0:
                return 0
            return 1 + max(walk(self.left[node]), walk(self.right[node]))

        return walk(0)

    def apply(self, X) -> np.ndarray:
        """Leaf index reached by every row of ``X``."""
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            f = self.feature[node]
            active = f >= 0
            if not active.any():
                return node
            r, n, fa = rows[active], node[active], f[active]
            go_left = X[r, fa] <= self.threshold[n]
            node[active] = np.where(go_left, self.left[n], self.right[n])

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d) -> "TreeArrays":
        return cls(
            np.asarray(d["feature"], dtype=np.int64),
            np.asarray(d["threshold"], dtype=np.float64),
            np.asarray(d["left"], dtype=np.int64),
            np.asarray(d["right"], dtype=np.int64),
            np.asarray(d["value"], dtype=np.int64),
        )


def _scan_feature(xs, ys, n_classes, min_leaf):
    """Best split of one feature as (score, threshold), or None.

    ``score`` is sum_k cL_k^2 / nL + sum_k cR_k^2 / nR; maximizing it
    minimizes the size-weighted Gini impurity of the children.
    """
    n = len(xs)
    order = np.argsort(xs, kind="stable")
    xs, ys = xs[order], ys[order]
    # a split after position i puts xs[:i+1] left
    pos = np.arange(min_leaf - 1, n - min_leaf)
    if len(pos) == 0:
        return None
    pos = pos[xs[pos] < xs[pos + 1]]
    if len(pos) == 0:
        return None
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), ys] = 1.0
    cum = np.cumsum(onehot, axis=0)
    left = cum[pos]
    right = cum[-1] - left
    n_left = (pos + 1).astype(np.float64)
    score = (left**2).sum(axis=1) / n_left + (right**2).sum(axis=1) / (n - n_left)
    best = score.max()
    i = int(np.flatnonzero(score >= best - TIE_TOL * max(1.0, abs(best)))[0])
    lo, hi = xs[pos[i]], xs[pos[i] + 1]
    thr = lo + (hi - lo) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return float(score[i]), float(thr)


def build_tree(X, y, n_classes, max_depth=12, min_leaf=2, max_features=None, rng=None):
    """Grow a tree on ``(X, y)``.

    ``max_features`` (int) restricts each node to that many features drawn by
    ``rng`` (a SplitMix64); when none of them admits a split the remaining
    features are scanned too.
    """
    d = X.shape[1]
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(idx):
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(np.bincount(y[idx], minlength=n_classes))
        return len(feature) - 1

    def search(idx, features):
        best = None
        for f in features:
            found = _scan_feature(X[idx, f], y[idx], n_classes, min_leaf)
            if found is None:
                continue
            score, thr = found
            if best is None or score > best[0] + TIE_TOL * max(1.0, abs(best[0])):
                best = (score, f, thr)
        return best

    def grow(idx, depth):
        node = new_node(idx)
        if (
            (max_depth is not None and depth >= max_depth)
            or len(idx) < 2 * min_leaf
            or np.count_nonzero(value[node]) <= 1
        ):
            return node
        if max_features is None or max_features >= d:
            best = search(idx, range(d))
        else:
            perm = rng.permutation(d)
            best = search(idx, sorted(perm[:max_features]))
            if best is None:
                best = search(idx, sorted(perm[max_features:]))
        if best is None:
            return node
        _, f, thr = best
        mask = X[idx, f] <= thr
        feature[node] = f
        threshold[node] = thr
        left[node] = grow(idx[mask], depth + 1)
        right[node] = grow(idx[~mask], depth + 1)
        return node

    grow(np.arange(len(y)), 0)
    return TreeArrays(
        np.asarray(feature, dtype=np.int64),
        np.asarray(threshold, dtype=np.float64),
        np.asarray(left, dtype=np.int64),
        np.asarray(right, dtype=np.int64),
        np.asarray(value, dtype=np.int64).reshape(-1, n_classes),
    )


class DecisionTree(Classifier):
    """Confidence is the majority fraction of the reached leaf."""

    algorithm = "dt"

    def __init__(self, max_depth: int | None = 12, min_leaf: int = 2, tau: float = 0.0):
        super().__init__(tau)
        if min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if max_depth is not None and max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        self.max_depth = max_depth
        self.min_leaf = int(min_leaf)
        self.tree = None

    def _fit(self, X, y):
        self.tree = build_tree(X, y, self.n_classes, self.max_depth, self.min_leaf)

    def _scores(self, X):
        counts = self.tree.value[self.tree.apply(X)].astype(np.float64)
        return counts / counts.sum(axis=1, keepdims=True)

    def hyperparameters(self):
        return {"max_depth": self.max_depth, "min_leaf": self.min_leaf}

    def state_dict(self):
        return {"tree": self.tree.to_dict()}

    def load_state(self, state):
        self.tree = TreeArrays.from_dict(state["tree"])
