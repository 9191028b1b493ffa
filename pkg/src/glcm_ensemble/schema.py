"""Feature vectors and stable fingerprints of the configs that produced them."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def fingerprint(obj, length: int = 16) -> str:
    """Hex SHA-256 prefix of the canonical JSON serialization of ``obj``."""
    return hashlib.sha256(canonical_json(obj).encode("ascii")).hexdigest()[:length]


@dataclass(frozen=True, eq=False)
class FeatureVector:
    values: np.ndarray
    names: tuple[str, ...]
    schema_id: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).ravel()
        if len(vals) != len(self.names):
            raise ValueError(f"{len(vals)} values but {len(self.names)} feature names")
        if not np.all(np.isfinite(vals)):
            raise ValueError("feature values must be finite")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "names", tuple(self.names))

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return self.names == other.names and np.array_equal(self.values, other.values)

    def concat(self, other: "FeatureVector", schema_id: str = "") -> "FeatureVector":
        return FeatureVector(
            np.concatenate([self.values, other.values]),
            self.names + other.names,
            schema_id,
            {**self.meta, **other.meta},
        )
