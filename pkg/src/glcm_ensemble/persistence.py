"""Model files: versioned JSON documents with round-trip-exact floats.

Python's ``json`` writes floats with ``repr``, which round-trips every
IEEE-754 double exactly, so a reloaded model predicts bit-identically.
"""

from __future__ import annotations

import json

from .classifiers import ALGORITHMS, Classifier, Standardizer
from .errors import CorruptModel, SchemaMismatch, VersionMismatch

MODEL_FORMAT = "glcm-ensemble/model"
MODEL_VERSION = 1


def model_to_dict(model: Classifier) -> dict:
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "algorithm": model.algorithm,
        "schema_id": model.schema_id,
        "n_classes": model.n_classes,
        "n_features": model.n_features,
        "tau": model.tau,
        "hyperparameters": model.hyperparameters(),
        "standardizer": None if model.standardizer is None else model.standardizer.to_dict(),
        "state": model.state_dict(),
    }


def dumps_model(model: Classifier) -> str:
    return json.dumps(model_to_dict(model), indent=1, sort_keys=True) + "\n"


def save_model(model: Classifier, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_model(model))


def _hyper_to_kwargs(algorithm: str, hp: dict) -> dict:
    if algorithm == "svm":
        return {"epochs": hp["epochs"], "lam": hp["lambda"], "seed": hp["seed"]}
    return dict(hp)


def model_from_dict(doc: dict, expected_schema: str | None = None) -> Classifier:
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise CorruptModel("not a model document")
    if doc.get("version") != MODEL_VERSION:
        raise VersionMismatch(
            f"model file version {doc.get('version')!r}, this reader supports {MODEL_VERSION}"
        )
    if expected_schema is not None and doc.get("schema_id") != expected_schema:
        raise SchemaMismatch(
            f"model was trained on feature schema {doc.get('schema_id')!r}, "
            f"expected {expected_schema!r}"
        )
    try:
        cls = ALGORITHMS[doc["algorithm"]]
        model = cls(tau=doc["tau"], **_hyper_to_kwargs(doc["algorithm"], doc["hyperparameters"]))
        model.n_classes = int(doc["n_classes"])
        model.n_features = int(doc["n_features"])
        model.schema_id = doc["schema_id"]
        if doc["standardizer"] is not None:
            model.standardizer = Standardizer.from_dict(doc["standardizer"])
        model.load_state(doc["state"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"malformed model document: {exc}") from exc
    return model


def loads_model(text: str, expected_schema: str | None = None) -> Classifier:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptModel(f"model file is not valid JSON: {exc}") from exc
    return model_from_dict(doc, expected_schema)


def load_model(path, expected_schema: str | None = None) -> Classifier:
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read(), expected_schema)
