"""Stratified splitting, confusion matrices and the accuracy/precision/recall/F1 suite."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .classifiers.base import UNKNOWN
from .errors import ClassTooSmall, EmptyMatrix, LengthMismatch, UnknownTrueLabel
from .seeding import SplitMix64, derive_seed

UNKNOWN_NAME = "unknown"


def stratified_split(labels, test_fraction: float, seed: int):
    """Per-class seeded shuffle; ``floor(n_c * f + 0.5)`` samples go to test.

    Every class keeps at least one sample on each side.  Returns sorted
    ``(train_indices, test_indices)``.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    labels = np.asarray(labels)
    train, test = [], []
    for ordinal, c in enumerate(sorted(set(labels.tolist()))):
        members = np.flatnonzero(labels == c).tolist()
        n = len(members)
        if n < 2:
            raise ClassTooSmall(f"class {c!r} has {n} sample(s); need at least 2")
        SplitMix64(derive_seed(seed, "split", ordinal)).shuffle(members)
        n_test = min(n - 1, max(1, math.floor(n * test_fraction + 0.5)))
        test.extend(members[:n_test])
        train.extend(members[n_test:])
    return np.array(sorted(train), dtype=np.int64), np.array(sorted(test), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Rows are true classes; columns are predicted classes plus an optional Unknown column."""

    classes: tuple[str, ...]
    counts: np.ndarray
    has_unknown: bool = False

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def column_labels(self) -> tuple[str, ...]:
        return self.classes + ((UNKNOWN_NAME,) if self.has_unknown else ())

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __eq__(self, other):
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return (
            self.classes == other.classes
            and self.has_unknown == other.has_unknown
            and np.array_equal(self.counts, other.counts)
        )

    def to_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "columns": list(self.column_labels),
            "counts": self.counts.tolist(),
        }


def confusion(y_true, y_pred, classes=None, include_unknown: bool | None = None) -> ConfusionMatrix:
    """Tally ``counts[true, pred]``.

    Labels are dense class ids; ``UNKNOWN`` (-1) is allowed in predictions
    only.  ``classes`` names the ids (default: their decimal strings).  The
    Unknown column is present when requested or when any prediction abstains.
    """
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if len(y_true) != len(y_pred):
        raise LengthMismatch(f"{len(y_true)} true labels vs {len(y_pred)} predictions")
    if classes is None:
        seen = np.concatenate([y_true, y_pred[y_pred != UNKNOWN]])
        k = int(seen.max()) + 1 if len(seen) else 0
        classes = [str(i) for i in range(k)]
    classes = tuple(str(c) for c in classes)
    k = len(classes)
    if len(y_true) and (y_true.min() < 0 or y_true.max() >= k):
        raise UnknownTrueLabel("true labels must be class ids in the class universe")
    if len(y_pred) and (y_pred.max() >= k or y_pred.min() < UNKNOWN):
        raise ValueError("prediction outside the class universe")
    abstained = y_pred == UNKNOWN
    if include_unknown is None:
        include_unknown = bool(abstained.any())
    elif not include_unknown and abstained.any():
        raise ValueError("predictions contain Unknown but include_unknown=False")
    width = k + (1 if include_unknown else 0)
    col = np.where(abstained, k, y_pred)
    counts = np.zeros((k, width), dtype=np.int64)
    np.add.at(counts, (y_true, col), 1)
    return ConfusionMatrix(classes, counts, include_unknown)


def _ratio(num, den) -> float:
    return float(num) / float(den) if den else 0.0


def _f1(p: float, r: float) -> float:
    return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass
class MetricsReport:
    accuracy: float
    precision: float  # headline, per ``average``
    recall: float
    f1: float
    average: str
    per_class_precision: list[float] = field(default_factory=list)
    per_class_recall: list[float] = field(default_factory=list)
    per_class_f1: list[float] = field(default_factory=list)
    macro: dict = field(default_factory=dict)
    micro: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "average": self.average,
            "per_class": {
                "precision": self.per_class_precision,
                "recall": self.per_class_recall,
                "f1": self.per_class_f1,
            },
            "macro": self.macro,
            "micro": self.micro,
        }


def metrics(cm: ConfusionMatrix, average: str = "macro") -> MetricsReport:
    """Accuracy plus per-class, macro and micro precision/recall/F1.

    Zero denominators give 0.  The Unknown column adds false negatives to
    its row's class but is not itself a class in the macro mean.
    """
    if average not in ("macro", "micro"):
        raise ValueError(f"unknown average {average!r}")
    total = cm.total
    if total <= 0:
        raise EmptyMatrix("confusion matrix holds no samples")
    k = cm.n_classes
    sq = cm.counts[:, :k]
    tp = np.diag(sq)
    predicted = sq.sum(axis=0)
    actual = cm.counts.sum(axis=1)
    precision = [_ratio(tp[c], predicted[c]) for c in range(k)]
    recall = [_ratio(tp[c], actual[c]) for c in range(k)]
    f1 = [_f1(p, r) for p, r in zip(precision, recall)]
    accuracy = _ratio(tp.sum(), total)
    # fsum is exactly rounded, so the mean does not depend on class order
    macro = {
        "precision": math.fsum(precision) / k,
        "recall": math.fsum(recall) / k,
        "f1": math.fsum(f1) / k,
    }
    micro_p = _ratio(tp.sum(), predicted.sum())
    micro_r = _ratio(tp.sum(), actual.sum())
    micro = {"precision": micro_p, "recall": micro_r, "f1": _f1(micro_p, micro_r)}
    head = macro if average == "macro" else micro
    return MetricsReport(
        accuracy,
        head["precision"],
        head["recall"],
        head["f1"],
        average,
        precision,
        recall,
        f1,
        macro,
        micro,
    )
