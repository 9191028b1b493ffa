"""Majority voting and priority cascade over aligned per-model predictions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifiers.base import UNKNOWN, Prediction
from .errors import EmptyMatrix, RaggedRow, UnknownExhausted

DEFAULT_MODEL_ORDER = ("rf", "svm", "knn", "nb", "dt")


@dataclass(frozen=True, eq=False)
class PredictionMatrix:
    """``labels[s, m]`` / ``confidences[s, m]``: model ``m``'s prediction for sample ``s``."""

    model_order: tuple[str, ...]
    labels: np.ndarray
    confidences: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        conf = np.asarray(self.confidences, dtype=np.float64)
        if labels.ndim != 2 or labels.shape[0] == 0:
            raise EmptyMatrix("prediction matrix has no rows")
        if labels.shape[1] != len(self.model_order) or conf.shape != labels.shape:
            raise RaggedRow(
                f"rows hold {labels.shape[1]} predictions for {len(self.model_order)} models"
            )
        object.__setattr__(self, "model_order", tuple(self.model_order))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "confidences", conf)

    @classmethod
    def from_rows(cls, rows, model_order=DEFAULT_MODEL_ORDER) -> "PredictionMatrix":
        """Build from per-sample lists of ``Prediction`` (or bare labels)."""
        rows = list(rows)
        if not rows:
            raise EmptyMatrix("prediction matrix has no rows")
        m = len(model_order)
        labels, conf = [], []
        for i, row in enumerate(rows):
            if len(row) != m:
                raise RaggedRow(f"row {i} has {len(row)} predictions, expected {m}")
            preds = [p if isinstance(p, Prediction) else Prediction(int(p), 1.0) for p in row]
            labels.append([p.label for p in preds])
            conf.append([p.confidence for p in preds])
        return cls(tuple(model_order), np.array(labels), np.array(conf))

    @classmethod
    def from_columns(cls, columns: dict, model_order=DEFAULT_MODEL_ORDER) -> "PredictionMatrix":
        """``columns[model] = (labels, confidences)`` arrays of equal length."""
        lengths = {len(columns[m][0]) for m in model_order}
        if len(lengths) != 1:
            raise RaggedRow(f"prediction streams differ in length: {sorted(lengths)}")
        labels = np.column_stack([columns[m][0] for m in model_order])
        conf = np.column_stack([columns[m][1] for m in model_order])
        return cls(tuple(model_order), labels, conf)

    def __len__(self):
        return self.labels.shape[0]


def vote(row_labels) -> Prediction:
    """Most frequent non-Unknown label of one row.

    Count ties go to the label cast by the earliest model; confidence is the
    winning count over the number of non-abstaining voters.
    """
    counts: dict[int, int] = {}
    first_seen: dict[int, int] = {}
    for pos, lab in enumerate(row_labels):
        lab = int(lab)
        if lab == UNKNOWN:
            continue
        counts[lab] = counts.get(lab, 0) + 1
        first_seen.setdefault(lab, pos)
    if not counts:
        return Prediction(UNKNOWN, 0.0)
    top = max(counts.values())
    winner = min((lab for lab, c in counts.items() if c == top), key=first_seen.__getitem__)
    return Prediction(winner, top / sum(counts.values()))


def voting_ensemble(pm: PredictionMatrix) -> list[Prediction]:
    return [vote(row) for row in pm.labels]


def combined_classifier(pm: PredictionMatrix, strict: bool = False) -> list[Prediction]:
    """First non-Unknown prediction in ``model_order``.

    The last model is accepted unconditionally, Unknown included.  With
    ``strict`` an all-Unknown row raises ``UnknownExhausted`` instead.
    """
    out = []
    last = pm.labels.shape[1] - 1
    for s, row in enumerate(pm.labels):
        for m, lab in enumerate(row):
            if lab != UNKNOWN or m == last:
                break
        if strict and row[m] == UNKNOWN:
            raise UnknownExhausted(f"every model abstained on sample {s}")
        out.append(Prediction(int(row[m]), float(pm.confidences[s, m])))
    return out


def labels_of(preds) -> np.ndarray:
    return np.array([p.label for p in preds], dtype=np.int64)
