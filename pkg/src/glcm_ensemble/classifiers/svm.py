from __future__ import annotations

import math

import numpy as np

from ..errors import SingleClass
from ..seeding import SplitMix64, derive_seed
from .base import Classifier


class LinearSVM(Classifier):
    """One-vs-rest linear SVM trained with Pegasos subgradient steps.

    Each class ``c`` gets a hinge-loss problem with targets +1 (class c) and
    -1 (rest).  The bias is folded in as a constant input feature and is
    regularized with the weights.  At global step ``t`` (1-based, counted
    across epochs) the step size is ``1 / (lam * t)``; after each step the
    weights are projected onto the ball of radius ``1 / sqrt(lam)``.  Epoch
    ``e`` visits samples in the order of
    ``SplitMix64(derive_seed(seed, "svm-epoch", e)).permutation(n)``.

    Confidence is the softmax over the per-class margins.
    """

    algorithm = "svm"
    uses_standardizer = True

    def __init__(self, epochs: int = 200, lam: float = 1e-3, seed: int = 0, tau: float = 0.0):
        super().__init__(tau)
        if epochs < 1:
            raise ValueError("epochs must be >= 1")
        if lam <= 0:
            raise ValueError("lambda must be positive")
        self.epochs = int(epochs)
        self.lam = float(lam)
        self.seed = int(seed)
        self.weights = None  # (n_classes, n_features)
        self.bias = None  # (n_classes,)

    def _fit(self, X, y):
        if len(np.unique(y)) < 2:
            raise SingleClass("one-vs-rest SVM needs at least two classes")
        n, d = X.shape
        k = self.n_classes
        Xa = np.hstack([X, np.ones((n, 1))])
        targets = np.where(y[:, None] == np.arange(k)[None, :], 1.0, -1.0)
        W = np.zeros((k, d + 1))
        radius = 1.0 / math.sqrt(self.lam)
        t = 0
        for epoch in range(self.epochs):
            order = SplitMix64(derive_seed(self.seed, "svm-epoch", epoch)).permutation(n)
            for i in order:
                t += 1
                eta = 1.0 / (self.lam * t)
                x, yt = Xa[i], targets[i]
                violated = yt * (W @ x) < 1.0
                W *= 1.0 - eta * self.lam
                if violated.any():
                    W[violated] += eta * np.outer(yt[violated], x)
                norms = np.sqrt(np.einsum("ij,ij->i", W, W))
                over = norms > radius
                if over.any():
                    W[over] *= (radius / norms[over])[:, None]
        self.weights = W[:, :d].copy()
        self.bias = W[:, d].copy()

    def margins(self, X) -> np.ndarray:
        return self._margins(self._prepare(X))

    def _margins(self, X):
        return X @ self.weights.T + self.bias[None, :]

    def _scores(self, X):
        m = self._margins(X)
        m = m - m.max(axis=1, keepdims=True)
        e = np.exp(m)
        return e / e.sum(axis=1, keepdims=True)

    def hyperparameters(self):
        return {"epochs": self.epochs, "lambda": self.lam, "seed": self.seed}

    def state_dict(self):
        return {"weights": self.weights.tolist(), "bias": self.bias.tolist()}

    def load_state(self, state):
        self.weights = np.asarray(state["weights"], dtype=np.float64).reshape(
            self.n_classes, self.n_features
        )
        self.bias = np.asarray(state["bias"], dtype=np.float64)
