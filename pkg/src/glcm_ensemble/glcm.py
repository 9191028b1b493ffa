"""Gray-level co-occurrence matrices and the five texture statistics.

Offsets are ``(dx, dy)`` in image coordinates: ``dx`` moves right along a
row, ``dy`` moves down a column.  The default angle set
``(1,0), (1,-1), (0,-1), (-1,-1)`` corresponds to 0, 45, 90 and 135 degrees.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, NoValidPairs
from .imaging import QuantizedImage
from .schema import FeatureVector, fingerprint

FEATURE_NAMES = ("energy", "contrast", "homogeneity", "entropy", "correlation")
DEFAULT_ANGLES = ((1, 0), (1, -1), (0, -1), (-1, -1))
DEGENERATE_SIGMA = 1e-12


class Offset(NamedTuple):
    dx: int
    dy: int

    def scaled(self, distance: int) -> "Offset":
        return Offset(self.dx * distance, self.dy * distance)


def make_offset(dx: int, dy: int) -> Offset:
    if dx == 0 and dy == 0:
        raise ValueError("offset (0, 0) pairs every pixel with itself")
    return Offset(int(dx), int(dy))


@dataclass(frozen=True, eq=False)
class CooccurrenceMatrix:
    """Normalized G x G pair probabilities, plus the raw counts when built from an image."""

    probs: np.ndarray
    pair_count: int = 0
    counts: np.ndarray | None = None

    @property
    def levels(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def from_counts(cls, counts) -> "CooccurrenceMatrix":
        counts = np.asarray(counts, dtype=np.int64)
        total = int(counts.sum())
        return cls(counts / total, total, counts)

    @classmethod
    def from_probs(cls, probs) -> "CooccurrenceMatrix":
        p = np.asarray(probs, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("co-occurrence matrix must be square")
        return cls(p)


class MarginalStats(NamedTuple):
    mu_x: float
    mu_y: float
    sigma_x: float
    sigma_y: float


@dataclass(frozen=True)
class GlcmConfig:
    levels: int = 16
    distance: int = 1
    angles: tuple[tuple[int, int], ...] = DEFAULT_ANGLES
    symmetric: bool = True
    aggregation: str = "mean"  # or "concatenate"
    log_base: float = 2.0
    stretch: bool = False

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(tuple(int(v) for v in a) for a in self.angles))
        if not self.angles:
            raise ConfigError("at least one offset angle is required")
        for dx, dy in self.angles:
            if dx == 0 and dy == 0:
                raise ConfigError("offset (0, 0) is not allowed")
        if self.distance < 1:
            raise ConfigError("distance must be >= 1")
        if not 2 <= self.levels <= 256:
            raise ConfigError("levels must be in [2, 256]")
        if self.aggregation not in ("mean", "concatenate"):
            raise ConfigError(f"unknown aggregation {self.aggregation!r}")
        if self.log_base <= 1:
            raise ConfigError("log_base must exceed 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["angles"] = [list(a) for a in self.angles]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GlcmConfig":
        d = dict(d)
        if "angles" in d:
            d["angles"] = tuple(tuple(a) for a in d["angles"])
        return cls(**d)

    def feature_names(self) -> tuple[str, ...]:
        if self.aggregation == "mean":
            return tuple(f"glcm_{n}" for n in FEATURE_NAMES)
        return tuple(
            f"glcm_{n}_{dx}_{dy}" for dx, dy in self.angles for n in FEATURE_NAMES
        )


def cooccurrence(img: QuantizedImage, off, symmetric: bool = True) -> CooccurrenceMatrix:
    """Count pairs ``(p, p + off)`` lying fully inside the image."""
    dx, dy = off
    h, w = img.pixels.shape
    if abs(dx) >= w or abs(dy) >= h:
        raise NoValidPairs(f"offset ({dx}, {dy}) exceeds a {w}x{h} image")
    px = img.pixels
    ref = px[max(0, -dy) : h - max(0, dy), max(0, -dx) : w - max(0, dx)]
    nbr = px[max(0, dy) : h - max(0, -dy), max(0, dx) : w - max(0, -dx)]
    g = img.levels
    counts = np.bincount((ref * g + nbr).ravel(), minlength=g * g).reshape(g, g)
    if symmetric:
        counts = counts + counts.T
    return CooccurrenceMatrix.from_counts(counts)


def _index_grids(g: int):
    i = np.arange(g, dtype=np.float64)
    return i[:, None], i[None, :]


def energy(m: CooccurrenceMatrix) -> float:
    p = m.probs
    return float(np.sum(p * p))


def contrast(m: CooccurrenceMatrix) -> float:
    p = m.probs
    i, j = _index_grids(p.shape[0])
    return float(np.sum((i - j) ** 2 * p))


def homogeneity(m: CooccurrenceMatrix) -> float:
    p = m.probs
    i, j = _index_grids(p.shape[0])
    return float(np.sum(p / (1.0 + (i - j) ** 2)))


def entropy(m: CooccurrenceMatrix, base: float = 2.0) -> float:
    """Shannon entropy with 0 log 0 = 0."""
    p = m.probs
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)) / math.log(base)) + 0.0


def marginals(m: CooccurrenceMatrix) -> MarginalStats:
    p = m.probs
    idx = np.arange(p.shape[0], dtype=np.float64)
    px = p.sum(axis=1)
    py = p.sum(axis=0)
    mu_x = float(idx @ px)
    mu_y = float(idx @ py)
    sigma_x = math.sqrt(float(((idx - mu_x) ** 2) @ px))
    sigma_y = math.sqrt(float(((idx - mu_y) ** 2) @ py))
    return MarginalStats(mu_x, mu_y, sigma_x, sigma_y)


def correlation(m: CooccurrenceMatrix, stats: MarginalStats | None = None) -> float:
    """Linear correlation of the row and column index; 0 when either spread vanishes."""
    st = stats or marginals(m)
    denom = st.sigma_x * st.sigma_y
    if denom < DEGENERATE_SIGMA:
        return 0.0
    p = m.probs
    idx = np.arange(p.shape[0], dtype=np.float64)
    # centred form: equal to sum(i*j*P) - mu_x*mu_y but without the cancellation
    cov = float((idx - st.mu_x) @ p @ (idx - st.mu_y))
    return cov / denom


def texture_stats(m: CooccurrenceMatrix, log_base: float = 2.0) -> np.ndarray:
    """The five statistics in ``FEATURE_NAMES`` order."""
    return np.array(
        [energy(m), contrast(m), homogeneity(m), entropy(m, log_base), correlation(m)]
    )


def glcm_features(img: QuantizedImage, cfg: GlcmConfig = GlcmConfig()) -> FeatureVector:
    if img.levels != cfg.levels:
        raise ConfigError(f"image has {img.levels} levels but config expects {cfg.levels}")
    per_angle = [
        texture_stats(
            cooccurrence(img, Offset(*a).scaled(cfg.distance), cfg.symmetric), cfg.log_base
        )
        for a in cfg.angles
    ]
    if cfg.aggregation == "mean":
        values = np.mean(per_angle, axis=0)
    else:
        values = np.concatenate(per_angle)
    return FeatureVector(
        values,
        cfg.feature_names(),
        fingerprint(cfg.to_dict()),
        {"glcm_log_base": cfg.log_base},
    )
