"""End-to-end orchestration: manifest -> features -> five models -> two ensembles -> metrics."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .classifiers import ALGORITHMS, Classifier, make_classifier
from .ensemble import DEFAULT_MODEL_ORDER, PredictionMatrix, combined_classifier, labels_of, voting_ensemble
from .errors import ConfigError, ExtractionError, GlcmEnsembleError, ManifestError
from .evaluation import ConfusionMatrix, MetricsReport, confusion, metrics, stratified_split
from .glcm import GlcmConfig, glcm_features
from .histogram import hist_features, histogram
from .imaging import load_image, quantize, resize
from .schema import canonical_json, fingerprint
from .seeding import SeedTree

log = logging.getLogger(__name__)

RESULT_FORMAT = "glcm-ensemble/result"
RESULT_VERSION = 1
CACHE_MAGIC = "# glcm-ensemble features v1"

ENSEMBLE_IDS = ("ve", "cc")
DISPLAY_NAMES = {
    "rf": "Random Forest (RF)",
    "knn": "k-Nearest Neighbors (k-NN)",
    "dt": "Decision Tree (Tree)",
    "svm": "Support Vector Machine (SVM)",
    "nb": "Naive Bayes (NB)",
    "ve": "Voting Ensemble (VE)",
    "cc": "Combined Classifier (CC)",
}

DEFAULT_HYPERPARAMETERS = {
    "rf": {"n_trees": 100, "max_depth": 12, "min_leaf": 2, "max_features": "sqrt"},
    "svm": {"epochs": 200, "lam": 1e-3},
    "knn": {"k": 5},
    "nb": {},
    "dt": {"max_depth": 12, "min_leaf": 2},
}


# ------------------------------------------------------------------ manifest


@dataclass
class DatasetManifest:
    entries: list[tuple[str, str]]
    class_names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.entries:
            raise ManifestError("manifest lists no images")
        paths = [p for p, _ in self.entries]
        if len(set(paths)) != len(paths):
            dup = next(p for p in paths if paths.count(p) > 1)
            raise ManifestError(f"duplicate path in manifest: {dup}")
        if not self.class_names:
            # ids follow first appearance in the manifest
            self.class_names = tuple(dict.fromkeys(lab for _, lab in self.entries))
        if len(self.class_names) < 2:
            raise ManifestError("manifest needs at least two distinct classes")

    @property
    def class_map(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.class_names)}

    @property
    def paths(self) -> list[str]:
        return [p for p, _ in self.entries]

    @property
    def labels(self) -> np.ndarray:
        cmap = self.class_map
        return np.array([cmap[lab] for _, lab in self.entries], dtype=np.int64)

    def digest(self) -> str:
        return fingerprint([list(e) for e in self.entries])


def read_manifest(path) -> DatasetManifest:
    """CSV with header ``path,label``; relative paths resolve against the manifest's folder."""
    base = os.path.dirname(os.path.abspath(path))
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["path", "label"]:
            raise ManifestError(f"{path}: header must be 'path,label', got {header!r}")
        entries = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2 or not row[0] or not row[1]:
                raise ManifestError(f"{path}:{lineno}: expected 'path,label'")
            img_path = row[0] if os.path.isabs(row[0]) else os.path.join(base, row[0])
            entries.append((os.path.normpath(img_path), row[1]))
    return DatasetManifest(entries)


def write_manifest(manifest: DatasetManifest, path, relative_to=None) -> None:
    base = relative_to or os.path.dirname(os.path.abspath(path))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("path,label\n")
        for p, lab in manifest.entries:
            fh.write(f"{os.path.relpath(p, base)},{lab}\n")


# -------------------------------------------------------------------- config


@dataclass
class PipelineConfig:
    resize: tuple[int, int] = (64, 64)
    glcm: GlcmConfig = field(default_factory=GlcmConfig)
    hist_bins: int = 16
    hyperparameters: dict = field(default_factory=lambda: json.loads(json.dumps(DEFAULT_HYPERPARAMETERS)))
    tau: dict = field(default_factory=lambda: {m: 0.0 for m in DEFAULT_MODEL_ORDER})
    model_order: tuple[str, ...] = DEFAULT_MODEL_ORDER
    test_fraction: float = 0.2
    seed: int = 42
    average: str = "macro"
    strict_cascade: bool = False

    def __post_init__(self):
        self.resize = tuple(int(v) for v in self.resize)
        self.model_order = tuple(self.model_order)
        if len(self.resize) != 2 or min(self.resize) < 1:
            raise ConfigError(f"resize must be two positive integers, got {self.resize}")
        if not 1 <= self.hist_bins <= 256:
            raise ConfigError("hist_bins must lie in [1, 256]")
        if sorted(self.model_order) != sorted(ALGORITHMS):
            raise ConfigError(f"model_order must be a permutation of {sorted(ALGORITHMS)}")
        hp = json.loads(json.dumps(DEFAULT_HYPERPARAMETERS))
        for alg, params in self.hyperparameters.items():
            if alg not in ALGORITHMS:
                raise ConfigError(f"hyperparameters for unknown classifier {alg!r}")
            hp[alg].update(params)
        self.hyperparameters = hp
        tau = {m: 0.0 for m in ALGORITHMS}
        for alg, value in self.tau.items():
            if alg not in ALGORITHMS:
                raise ConfigError(f"threshold for unknown classifier {alg!r}")
            if not 0.0 <= float(value) <= 1.0:
                raise ConfigError(f"threshold for {alg} must lie in [0, 1]")
            tau[alg] = float(value)
        self.tau = tau
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError("test_fraction must lie in (0, 1)")
        if self.average not in ("macro", "micro"):
            raise ConfigError("average must be 'macro' or 'micro'")

    def extraction_dict(self) -> dict:
        return {"resize": list(self.resize), "glcm": self.glcm.to_dict(), "hist_bins": self.hist_bins}

    def extraction_fingerprint(self) -> str:
        """Identifies the feature schema; models and caches carry it."""
        return fingerprint(self.extraction_dict())

    def to_dict(self) -> dict:
        return {
            **self.extraction_dict(),
            "hyperparameters": self.hyperparameters,
            "tau": self.tau,
            "model_order": list(self.model_order),
            "test_fraction": self.test_fraction,
            "seed": self.seed,
            "average": self.average,
            "strict_cascade": self.strict_cascade,
        }

    def fingerprint(self) -> str:
        return fingerprint(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        d = dict(d)
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "glcm" in d:
            try:
                d["glcm"] = GlcmConfig.from_dict(d["glcm"])
            except TypeError as exc:
                raise ConfigError(f"bad glcm section: {exc}") from exc
        return cls(**d)

    def feature_names(self) -> tuple[str, ...]:
        from .histogram import hist_feature_names

        return self.glcm.feature_names() + hist_feature_names(self.hist_bins)


def load_config(path) -> PipelineConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return PipelineConfig.from_dict(doc)


def benchmark_config(seed: int = 42) -> PipelineConfig:
    """Config for the synthetic benchmark.

    Per-angle features are concatenated: averaging over the 0/45/90/135 set
    is invariant to 90-degree rotation, which would make vertical and
    horizontal stripes indistinguishable.
    """
    return PipelineConfig(glcm=GlcmConfig(aggregation="concatenate"), seed=seed)


# ------------------------------------------------------------------ features


@dataclass
class FeatureTable:
    paths: list[str]
    labels: list[str]
    names: tuple[str, ...]
    X: np.ndarray
    schema_id: str
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def __len__(self):
        return len(self.paths)

    def class_ids(self, class_names) -> np.ndarray:
        cmap = {n: i for i, n in enumerate(class_names)}
        return np.array([cmap[lab] for lab in self.labels], dtype=np.int64)


def image_features(path, cfg: PipelineConfig) -> np.ndarray:
    """load -> resize -> (quantize -> GLCM) || (histogram), concatenated."""
    img = resize(load_image(path), *cfg.resize)
    g = glcm_features(quantize(img, cfg.glcm.levels, cfg.glcm.stretch), cfg.glcm)
    h = hist_features(histogram(img, cfg.hist_bins))
    return np.concatenate([g.values, h.values])


def _extract_one(args):
    path, cfg, skip_bad = args
    try:
        return image_features(path, cfg), None
    except (GlcmEnsembleError, OSError) as exc:
        if not skip_bad:
            raise ExtractionError(path, exc) from exc
        return None, str(exc)


def extract_features(
    manifest: DatasetManifest,
    cfg: PipelineConfig,
    cache_path=None,
    threads: int = 1,
    skip_bad: bool = False,
) -> FeatureTable:
    """Feature table in manifest order, reusing ``cache_path`` when its fingerprint matches."""
    schema_id = cfg.extraction_fingerprint()
    if cache_path is not None and os.path.exists(cache_path):
        cached = read_feature_cache(cache_path, schema_id, manifest.digest())
        if cached is not None:
            log.info("feature cache hit: %s", cache_path)
            return cached
    jobs = [(p, cfg, skip_bad) for p in manifest.paths]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(_extract_one, jobs))
    else:
        results = [_extract_one(j) for j in jobs]
    rows, paths, labels, skipped = [], [], [], []
    for (path, label), (vec, err) in zip(manifest.entries, results):
        if vec is None:
            skipped.append((path, err))
            log.warning("skipping %s: %s", path, err)
            continue
        rows.append(vec)
        paths.append(path)
        labels.append(label)
    names = cfg.feature_names()
    X = np.vstack(rows) if rows else np.zeros((0, len(names)))
    table = FeatureTable(paths, labels, names, X, schema_id, skipped)
    if cache_path is not None:
        write_feature_cache(table, cache_path, manifest.digest())
    return table


def feature_cache_text(table: FeatureTable, manifest_digest: str = "") -> str:
    buf = io.StringIO()
    buf.write(f"{CACHE_MAGIC} fingerprint={table.schema_id} manifest={manifest_digest}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["path", "label", *table.names])
    for path, label, row in zip(table.paths, table.labels, table.X):
        writer.writerow([path, label, *(repr(float(v)) for v in row)])
    return buf.getvalue()


def write_feature_cache(table: FeatureTable, path, manifest_digest: str = "") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(feature_cache_text(table, manifest_digest))


def read_feature_cache(path, schema_id: str | None = None, manifest_digest: str | None = None):
    """Parse a cache file; ``None`` when it was made under another config or manifest."""
    with open(path, encoding="utf-8", newline="") as fh:
        first = fh.readline().rstrip("\n")
        if not first.startswith(CACHE_MAGIC):
            return None
        meta = dict(tok.split("=", 1) for tok in first[len(CACHE_MAGIC) :].split() if "=" in tok)
        if schema_id is not None and meta.get("fingerprint") != schema_id:
            return None
        if manifest_digest is not None and meta.get("manifest") != manifest_digest:
            return None
        reader = csv.reader(fh)
        header = next(reader)
        paths, labels, rows = [], [], []
        for row in reader:
            paths.append(row[0])
            labels.append(row[1])
            rows.append([float(v) for v in row[2:]])
    names = tuple(header[2:])
    X = np.array(rows, dtype=np.float64).reshape(-1, len(names))
    return FeatureTable(paths, labels, names, X, meta.get("fingerprint", ""))


# ---------------------------------------------------------------- experiment


@dataclass
class ModelOutcome:
    model_id: str
    labels: np.ndarray
    confidences: np.ndarray
    confusion: ConfusionMatrix
    report: MetricsReport


@dataclass
class ExperimentResult:
    config: PipelineConfig
    class_names: tuple[str, ...]
    train_paths: list[str]
    test_paths: list[str]
    y_test: np.ndarray
    outcomes: dict  # id -> ModelOutcome, base models then ensembles
    models: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)

    def _relative_test_paths(self) -> list[str]:
        every = self.train_paths + self.test_paths
        base = os.path.commonpath([os.path.dirname(os.path.abspath(p)) for p in every])
        return [os.path.relpath(os.path.abspath(p), base).replace(os.sep, "/") for p in self.test_paths]

    def to_dict(self) -> dict:
        return {
            "format": RESULT_FORMAT,
            "version": RESULT_VERSION,
            "generator": f"glcm-ensemble {__version__}",
            "seed": self.config.seed,
            "config": self.config.to_dict(),
            "config_fingerprint": self.config.fingerprint(),
            "schema_id": self.config.extraction_fingerprint(),
            "classes": list(self.class_names),
            "split": {
                "train": len(self.train_paths),
                "test": len(self.test_paths),
                "test_paths": self._relative_test_paths(),
            },
            "skipped": [list(s) for s in self.skipped],
            "results": {
                mid: {
                    "name": DISPLAY_NAMES[mid],
                    "confusion": o.confusion.to_dict(),
                    "metrics": o.report.to_dict(),
                }
                for mid, o in self.outcomes.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_json())


def build_models(cfg: PipelineConfig, threads: int = 1) -> dict[str, Classifier]:
    seeds = SeedTree(cfg.seed)
    models = {}
    for alg in cfg.model_order:
        params = dict(cfg.hyperparameters[alg])
        if alg == "rf":
            params.update(seed=seeds.seed("rf"), n_jobs=threads)
        elif alg == "svm":
            params.update(seed=seeds.seed("svm"))
        models[alg] = make_classifier(alg, tau=cfg.tau[alg], **params)
    return models


def run_experiment(
    manifest: DatasetManifest,
    cfg: PipelineConfig,
    threads: int = 1,
    table: FeatureTable | None = None,
    cache_path=None,
    skip_bad: bool = False,
) -> ExperimentResult:
    """Split, fit the five models, predict, combine and score.

    ``threads`` only changes wall time: extraction maps images in order and
    forest trees draw from per-tree seeds.
    """
    if table is None:
        table = extract_features(manifest, cfg, cache_path, threads, skip_bad)
    class_names = manifest.class_names
    y = table.class_ids(class_names)
    train_idx, test_idx = stratified_split(y, cfg.test_fraction, SeedTree(cfg.seed).seed("split"))
    X_train, y_train = table.X[train_idx], y[train_idx]
    X_test, y_test = table.X[test_idx], y[test_idx]

    models = build_models(cfg, threads)
    k = len(class_names)
    streams = {}
    for alg, model in models.items():
        model.fit(X_train, y_train, n_classes=k, schema_id=table.schema_id)
        streams[alg] = model.predict_labels(X_test)
    pm = PredictionMatrix.from_columns(streams, cfg.model_order)
    ve = voting_ensemble(pm)
    cc = combined_classifier(pm, strict=cfg.strict_cascade)
    streams["ve"] = (labels_of(ve), np.array([p.confidence for p in ve]))
    streams["cc"] = (labels_of(cc), np.array([p.confidence for p in cc]))

    outcomes = {}
    for mid in (*cfg.model_order, *ENSEMBLE_IDS):
        labels, conf = streams[mid]
        cm = confusion(y_test, labels, class_names)
        outcomes[mid] = ModelOutcome(mid, labels, conf, cm, metrics(cm, cfg.average))
    return ExperimentResult(
        cfg,
        class_names,
        [table.paths[i] for i in train_idx],
        [table.paths[i] for i in test_idx],
        y_test,
        outcomes,
        models,
        table.skipped,
    )


__all__ = [
    "DatasetManifest",
    "ExperimentResult",
    "FeatureTable",
    "PipelineConfig",
    "benchmark_config",
    "canonical_json",
    "extract_features",
    "load_config",
    "read_feature_cache",
    "read_manifest",
    "run_experiment",
    "write_feature_cache",
    "write_manifest",
]
