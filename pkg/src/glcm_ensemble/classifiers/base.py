"""Shared classifier contract: predictions with confidence and an Unknown state."""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from ..errors import EmptyTrainingSet, NotFitted

log = logging.getLogger(__name__)

UNKNOWN = -1
STD_FLOOR = 1e-12


class Prediction(NamedTuple):
    label: int
    confidence: float

    @property
    def is_unknown(self) -> bool:
        return self.label == UNKNOWN


def apply_threshold(p: Prediction, tau: float) -> Prediction:
    """Abstain (label Unknown, confidence kept) when confidence < tau."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {tau}")
    if p.confidence < tau:
        return Prediction(UNKNOWN, p.confidence)
    return p


class Standardizer:
    """Z-score transform fitted on training data.

    Dimensions whose spread is below ``STD_FLOOR`` are centred but not scaled.
    """

    def __init__(self, mean=None, scale=None):
        self.mean = None if mean is None else np.asarray(mean, dtype=np.float64)
        self.scale = None if scale is None else np.asarray(scale, dtype=np.float64)

    def fit(self, X):
        X = np.asarray(X, dtype=np.float64)
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std < STD_FLOOR, 1.0, std)
        return self

    def transform(self, X):
        if self.mean is None:
            raise NotFitted("standardizer is not fitted")
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.scale

    def to_dict(self):
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(d["mean"], d["scale"])


def check_training_data(X, y, n_classes=None):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.shape[0] == 0:
        raise EmptyTrainingSet("no training samples")
    if X.ndim != 2 or len(y) != X.shape[0]:
        raise ValueError(f"X has shape {X.shape} but y has {len(y)} labels")
    if not np.all(np.isfinite(X)):
        raise ValueError("training features must be finite")
    if not np.issubdtype(y.dtype, np.integer) or y.min() < 0:
        raise ValueError("labels must be non-negative integer class ids")
    y = y.astype(np.int64)
    k = int(y.max()) + 1 if n_classes is None else int(n_classes)
    if y.max() >= k:
        raise ValueError(f"label {int(y.max())} outside the {k}-class universe")
    return X, y, k


class Classifier:
    """Base for the five models.

    Subclasses implement ``_fit`` and ``_scores``; ``_scores`` returns an
    (n, n_classes) matrix whose row maximum is the confidence and whose
    first maximal column is the label, which fixes every label tie toward
    the smallest class id.
    """

    algorithm = ""
    uses_standardizer = False

    def __init__(self, tau: float = 0.0):
        if not 0.0 <= tau <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {tau}")
        self.tau = float(tau)
        self.n_classes = None
        self.n_features = None
        self.standardizer = None
        self.schema_id = ""

    # -- training
    def fit(self, X, y, n_classes=None, schema_id: str = ""):
        X, y, k = check_training_data(X, y, n_classes)
        self.n_classes = k
        self.n_features = X.shape[1]
        self.schema_id = schema_id
        if self.uses_standardizer:
            self.standardizer = Standardizer().fit(X)
            X = self.standardizer.transform(X)
        self._fit(X, y)
        return self

    def _fit(self, X, y):
        raise NotImplementedError

    # -- inference
    def _prepare(self, X):
        if self.n_classes is None:
            raise NotFitted(f"{type(self).__name__} is not fitted")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, self.n_features)
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        if self.standardizer is not None:
            X = self.standardizer.transform(X)
        return X

    def scores(self, X) -> np.ndarray:
        return self._scores(self._prepare(X))

    def _scores(self, X) -> np.ndarray:
        raise NotImplementedError

    def predict_raw(self, X) -> tuple[np.ndarray, np.ndarray]:
        """Labels and confidences before the abstention threshold."""
        s = self.scores(X)
        labels = np.argmax(s, axis=1)
        return labels.astype(np.int64), s[np.arange(len(s)), labels]

    def predict_labels(self, X) -> tuple[np.ndarray, np.ndarray]:
        """Labels (Unknown where confidence < tau) and confidences."""
        labels, conf = self.predict_raw(X)
        return np.where(conf < self.tau, UNKNOWN, labels), conf

    def predict(self, X) -> list[Prediction]:
        labels, conf = self.predict_labels(X)
        return [Prediction(int(lab), float(c)) for lab, c in zip(labels, conf)]

    def predict_one(self, x) -> Prediction:
        return self.predict(np.asarray(x, dtype=np.float64).reshape(1, -1))[0]

    # -- persistence
    def hyperparameters(self) -> dict:
        return {}

    def state_dict(self) -> dict:
        raise NotImplementedError

    def load_state(self, state: dict) -> None:
        raise NotImplementedError
