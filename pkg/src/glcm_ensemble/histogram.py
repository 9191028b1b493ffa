"""Intensity histograms over the fixed range [0, 255]."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyHistogram, InvalidBinCount
from .imaging import GrayImage
from .schema import FeatureVector, fingerprint


@dataclass(frozen=True, eq=False)
class Histogram:
    bins: np.ndarray
    range: tuple[int, int] = (0, 255)

    @property
    def bin_count(self) -> int:
        return len(self.bins)

    @property
    def total(self) -> int:
        return int(self.bins.sum())


def histogram(img: GrayImage, bin_count: int = 16) -> Histogram:
    """Pixel ``p`` lands in bin ``floor(p * N / 256)``."""
    if not isinstance(bin_count, (int, np.integer)) or not 1 <= bin_count <= 256:
        raise InvalidBinCount(f"bin count must be an integer in [1, 256], got {bin_count!r}")
    idx = (img.pixels.astype(np.int64) * bin_count) >> 8
    return Histogram(np.bincount(idx.ravel(), minlength=bin_count).astype(np.int64))


def hist_feature_names(bin_count: int) -> tuple[str, ...]:
    width = len(str(bin_count - 1))
    return tuple(f"hist_{i:0{width}d}" for i in range(bin_count))


def hist_features(h: Histogram) -> FeatureVector:
    total = h.total
    if total <= 0:
        raise EmptyHistogram("histogram holds no pixels")
    return FeatureVector(
        h.bins / total,
        hist_feature_names(h.bin_count),
        fingerprint({"hist_bins": h.bin_count}),
    )
