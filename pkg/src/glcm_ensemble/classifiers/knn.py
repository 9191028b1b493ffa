from __future__ import annotations

import numpy as np

from .base import Classifier, log


class KNearestNeighbors(Classifier):
    """Majority vote of the k nearest standardized training points.

    Distance ties go to the earlier training sample; vote ties go to the
    smallest class id.  Confidence is the winning vote fraction.
    """

    algorithm = "knn"
    uses_standardizer = True

    def __init__(self, k: int = 5, tau: float = 0.0):
        super().__init__(tau)
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = int(k)
        self.X = None
        self.y = None

    def _fit(self, X, y):
        if self.k > len(X):
            log.warning("k=%d exceeds %d training samples; clamping", self.k, len(X))
        self.X = X
        self.y = y

    @property
    def k_effective(self) -> int:
        return min(self.k, len(self.X))

    def _scores(self, Q):
        k = self.k_effective
        out = np.zeros((len(Q), self.n_classes))
        for row, q in enumerate(Q):
            d2 = np.sum((self.X - q) ** 2, axis=1)
            nearest = np.argsort(d2, kind="stable")[:k]
            out[row] = np.bincount(self.y[nearest], minlength=self.n_classes) / k
        return out

    def hyperparameters(self):
        return {"k": self.k}

    def state_dict(self):
        return {"X": self.X.tolist(), "y": self.y.tolist()}

    def load_state(self, state):
        self.X = np.asarray(state["X"], dtype=np.float64).reshape(-1, self.n_features)
        self.y = np.asarray(state["y"], dtype=np.int64)
