from __future__ import annotations

import math

import numpy as np

from .base import Classifier

VAR_SMOOTHING = 1e-9


class GaussianNaiveBayes(Classifier):
    """Gaussian naive Bayes with class-frequency priors.

    Every per-class variance gets ``1e-9 * max feature variance`` added; if
    all features are constant that maximum is taken as 1 so the densities
    stay finite.  Confidence is the softmax-normalized posterior.
    """

    algorithm = "nb"

    def __init__(self, tau: float = 0.0, var_smoothing: float = VAR_SMOOTHING):
        super().__init__(tau)
        self.var_smoothing = float(var_smoothing)
        self.means = None
        self.variances = None
        self.log_priors = None

    def _fit(self, X, y):
        k, d = self.n_classes, X.shape[1]
        max_var = float(X.var(axis=0).max())
        eps = self.var_smoothing * (max_var if max_var > 0 else 1.0)
        self.means = np.zeros((k, d))
        self.variances = np.ones((k, d))
        counts = np.bincount(y, minlength=k)
        for c in range(k):
            rows = X[y == c]
            if len(rows):
                self.means[c] = rows.mean(axis=0)
                self.variances[c] = rows.var(axis=0) + eps
        with np.errstate(divide="ignore"):
            self.log_priors = np.log(counts / counts.sum())

    def log_joint(self, X) -> np.ndarray:
        X = self._prepare(X)
        return self._log_joint(X)

    def _log_joint(self, X):
        var = self.variances
        norm = -0.5 * np.sum(np.log(2.0 * math.pi * var), axis=1)
        sq = ((X[:, None, :] - self.means[None, :, :]) ** 2 / var[None, :, :]).sum(axis=2)
        return self.log_priors[None, :] + norm[None, :] - 0.5 * sq

    def _scores(self, X):
        jll = self._log_joint(X)
        jll = jll - jll.max(axis=1, keepdims=True)
        post = np.exp(jll)
        return post / post.sum(axis=1, keepdims=True)

    def hyperparameters(self):
        return {"var_smoothing": self.var_smoothing}

    def state_dict(self):
        return {
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            # -inf marks classes absent from training
            "log_priors": [p if math.isfinite(p) else None for p in self.log_priors.tolist()],
        }

    def load_state(self, state):
        self.means = np.asarray(state["means"], dtype=np.float64)
        self.variances = np.asarray(state["variances"], dtype=np.float64)
        self.log_priors = np.array(
            [-math.inf if p is None else p for p in state["log_priors"]], dtype=np.float64
        )
