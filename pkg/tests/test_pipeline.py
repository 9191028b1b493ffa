import json
import os

import numpy as np
import pytest

from glcm_ensemble.errors import ConfigError, ExtractionError, ManifestError
from glcm_ensemble.glcm import GlcmConfig
from glcm_ensemble.imaging import GrayImage, write_pgm
from glcm_ensemble.pipeline import (
    DatasetManifest,
    PipelineConfig,
    benchmark_config,
    extract_features,
    load_config,
    read_feature_cache,
    read_manifest,
    run_experiment,
)
from glcm_ensemble.synthetic import CLASS_NAMES, generate_benchmark


@pytest.fixture(scope="module")
def small_bench(tmp_path_factory):
    out = tmp_path_factory.mktemp("bench")
    return generate_benchmark(str(out), per_class=10, size=32, seed=5)


def small_config(**kw):
    base = dict(
        resize=(32, 32),
        glcm=GlcmConfig(aggregation="concatenate"),
        hyperparameters={"rf": {"n_trees": 15}, "svm": {"epochs": 30}},
        seed=3,
    )
    base.update(kw)
    return PipelineConfig(**base)


# -------------------------------------------------------------- manifest


def test_read_manifest_resolves_relative_paths(tmp_path):
    (tmp_path / "imgs").mkdir()
    (tmp_path / "m.csv").write_text("path,label\nimgs/a.pgm,cat\nimgs/b.pgm,dog\nimgs/c.pgm,cat\n")
    m = read_manifest(tmp_path / "m.csv")
    assert m.paths[0] == str(tmp_path / "imgs" / "a.pgm")
    assert m.class_map == {"cat": 0, "dog": 1}
    assert m.labels.tolist() == [0, 1, 0]


@pytest.mark.parametrize(
    "text",
    [
        "file,label\na.pgm,x\nb.pgm,y\n",
        "path,label\na.pgm,x\na.pgm,y\n",
        "path,label\na.pgm,x\nb.pgm,x\n",
        "path,label\na.pgm\n",
        "path,label\n",
    ],
)
def test_bad_manifests(tmp_path, text):
    (tmp_path / "m.csv").write_text(text)
    with pytest.raises(ManifestError):
        read_manifest(tmp_path / "m.csv")


def test_benchmark_manifest_class_order(small_bench):
    m = read_manifest(small_bench)
    assert m.class_names == CLASS_NAMES
    assert len(m.entries) == 40


# ---------------------------------------------------------------- config


def test_config_round_trip(tmp_path):
    cfg = small_config(tau={"rf": 0.3})
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg.to_dict()))
    back = load_config(path)
    assert back.to_dict() == cfg.to_dict()
    assert back.fingerprint() == cfg.fingerprint()


def test_config_defaults_fill_in():
    cfg = PipelineConfig.from_dict({"hyperparameters": {"knn": {"k": 3}}})
    assert cfg.hyperparameters["knn"] == {"k": 3}
    assert cfg.hyperparameters["rf"]["n_trees"] == 100
    assert cfg.tau == {m: 0.0 for m in ("rf", "svm", "knn", "nb", "dt")}
    assert cfg.model_order == ("rf", "svm", "knn", "nb", "dt")


@pytest.mark.parametrize(
    "doc",
    [
        {"bogus": 1},
        {"tau": {"rf": 2.0}},
        {"tau": {"xgb": 0.1}},
        {"model_order": ["rf", "svm"]},
        {"test_fraction": 0},
        {"glcm": {"levels": 1}},
        {"glcm": {"colour": True}},
        {"hist_bins": 0},
        {"resize": [0, 10]},
    ],
)
def test_config_rejects(doc):
    with pytest.raises(ConfigError):
        PipelineConfig.from_dict(doc)


EXTRACTION_PERTURBATIONS = [
    {"resize": (32, 31)},
    {"hist_bins": 8},
    {"glcm": GlcmConfig(levels=8)},
    {"glcm": GlcmConfig(distance=2)},
    {"glcm": GlcmConfig(angles=((1, 0),))},
    {"glcm": GlcmConfig(symmetric=False)},
    {"glcm": GlcmConfig(aggregation="concatenate")},
    {"glcm": GlcmConfig(log_base=10.0)},
    {"glcm": GlcmConfig(stretch=True)},
]


def test_every_extraction_field_changes_fingerprint():
    base = PipelineConfig(resize=(32, 32))
    prints = {base.extraction_fingerprint()}
    for change in EXTRACTION_PERTURBATIONS:
        prints.add(PipelineConfig(**{"resize": (32, 32), **change}).extraction_fingerprint())
    assert len(prints) == len(EXTRACTION_PERTURBATIONS) + 1


def test_training_fields_do_not_touch_schema():
    a, b = PipelineConfig(), PipelineConfig(seed=1, tau={"rf": 0.5})
    assert a.extraction_fingerprint() == b.extraction_fingerprint()
    assert a.fingerprint() != b.fingerprint()


# ------------------------------------------------------------- features


def test_three_images_by_21_features(tmp_path, rng):
    entries = []
    for i, lab in enumerate(["a", "b", "a"]):
        p = tmp_path / f"{i}.pgm"
        write_pgm(GrayImage(rng.integers(0, 256, (20, 30)).astype(np.uint8)), p)
        entries.append((str(p), lab))
    table = extract_features(DatasetManifest(entries), PipelineConfig())
    assert table.X.shape == (3, 21)
    assert table.names[:5] == ("glcm_energy", "glcm_contrast", "glcm_homogeneity", "glcm_entropy",
                               "glcm_correlation")
    assert table.names[5] == "hist_00" and table.names[-1] == "hist_15"
    assert table.paths == [e[0] for e in entries]


def test_cache_hit_needs_no_images(tmp_path, small_bench):
    manifest = read_manifest(small_bench)
    cfg = small_config()
    cache = tmp_path / "f.csv"
    cold = extract_features(manifest, cfg, cache)
    first = cache.read_bytes()
    moved = {}
    for p in manifest.paths:
        moved[p] = p + ".hidden"
        os.rename(p, moved[p])
    try:
        warm = extract_features(manifest, cfg, cache)
    finally:
        for src, dst in moved.items():
            os.rename(dst, src)
    assert np.array_equal(warm.X, cold.X)
    assert warm.paths == cold.paths and warm.labels == cold.labels
    assert cache.read_bytes() == first


def test_cache_miss_on_config_change(tmp_path, small_bench):
    manifest = read_manifest(small_bench)
    cache = tmp_path / "f.csv"
    extract_features(manifest, small_config(), cache)
    for change in EXTRACTION_PERTURBATIONS[:4]:
        cfg = small_config(**change)
        assert read_feature_cache(cache, cfg.extraction_fingerprint(), manifest.digest()) is None
    other = extract_features(manifest, small_config(hist_bins=8), cache)
    assert other.X.shape[1] == 20 + 8
    assert read_feature_cache(cache).schema_id == small_config(hist_bins=8).extraction_fingerprint()


def test_cache_header_format(tmp_path, small_bench):
    manifest = read_manifest(small_bench)
    cfg = small_config()
    cache = tmp_path / "f.csv"
    extract_features(manifest, cfg, cache)
    first, header = cache.read_text().splitlines()[:2]
    assert first.startswith("#") and f"fingerprint={cfg.extraction_fingerprint()}" in first
    assert header.split(",")[:2] == ["path", "label"]
    assert header.split(",")[2:] == list(cfg.feature_names())


def test_threads_do_not_change_features(small_bench):
    manifest = read_manifest(small_bench)
    a = extract_features(manifest, small_config(), threads=1)
    b = extract_features(manifest, small_config(), threads=4)
    assert np.array_equal(a.X, b.X)


def test_bad_image_fail_fast_and_skip(tmp_path, small_bench):
    manifest = read_manifest(small_bench)
    bad = tmp_path / "broken.pgm"
    bad.write_bytes(b"P5\n4 4\n255\n\x00")
    entries = manifest.entries + [(str(bad), CLASS_NAMES[0])]
    m = DatasetManifest(entries, CLASS_NAMES)
    with pytest.raises(ExtractionError) as info:
        extract_features(m, small_config())
    assert info.value.path == str(bad)
    table = extract_features(m, small_config(), skip_bad=True)
    assert len(table) == len(manifest.entries)
    assert table.skipped[0][0] == str(bad)


# ------------------------------------------------------------ experiment


def test_experiment_shapes_and_cascade_identity(small_bench):
    manifest = read_manifest(small_bench)
    res = run_experiment(manifest, small_config())
    assert list(res.outcomes) == ["rf", "svm", "knn", "nb", "dt", "ve", "cc"]
    assert len(res.test_paths) == 8 and len(res.train_paths) == 32
    rf, cc = res.outcomes["rf"], res.outcomes["cc"]
    assert cc.confusion == rf.confusion
    assert np.array_equal(cc.labels, rf.labels)
    assert cc.report.to_dict() == rf.report.to_dict()


def test_experiment_byte_identical(small_bench):
    manifest = read_manifest(small_bench)
    a = run_experiment(manifest, small_config()).to_json()
    b = run_experiment(manifest, small_config(), threads=3).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["format"] == "glcm-ensemble/result" and doc["version"] == 1
    assert doc["seed"] == 3 and set(doc["results"]) == {"rf", "svm", "knn", "nb", "dt", "ve", "cc"}


def test_experiment_seed_changes_split(small_bench):
    manifest = read_manifest(small_bench)
    a = run_experiment(manifest, small_config(seed=1))
    b = run_experiment(manifest, small_config(seed=2))
    assert a.test_paths != b.test_paths


def test_abstention_feeds_cascade(small_bench):
    manifest = read_manifest(small_bench)
    res = run_experiment(manifest, small_config(tau={"rf": 1.0, "svm": 1.0}))
    rf = res.outcomes["rf"]
    unknown = rf.labels == -1
    if unknown.any():
        assert rf.confusion.has_unknown
    cc = res.outcomes["cc"].labels
    knn = res.outcomes["knn"].labels
    assert np.array_equal(cc[unknown & (res.outcomes["svm"].labels == -1)],
                          knn[unknown & (res.outcomes["svm"].labels == -1)])
    assert np.array_equal(cc[~unknown], rf.labels[~unknown])


def test_benchmark_config_uses_per_angle_features():
    cfg = benchmark_config()
    assert cfg.glcm.aggregation == "concatenate"
    assert len(cfg.feature_names()) == 20 + 16
