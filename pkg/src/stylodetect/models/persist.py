"""Versioned JSON documents for fitted models."""
from __future__ import annotations

import json
from pathlib import Path

from ..errors import SchemaMismatch, UnsupportedModel
from ..features import FEATURE_NAMES, schema_hash

SCHEMA_VERSION = 1


def model_to_dict(model, feature_names=FEATURE_NAMES) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "family": model.name,
        "feature_schema_hash": schema_hash(feature_names),
        "hyperparams": model.hyperparams,
        "state": model.get_state(),
    }


def model_from_dict(doc: dict, feature_names=FEATURE_NAMES):
    from .selection import MODEL_CLASSES

    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(f"unsupported model schema_version {doc.get('schema_version')!r}")
    if doc.get("feature_schema_hash") != schema_hash(feature_names):
        raise SchemaMismatch("model was trained on a different feature schema")
    cls = MODEL_CLASSES.get(doc.get("family"))
    if cls is None:
        raise UnsupportedModel(f"unknown model family {doc.get('family')!r}")
    return cls.from_state(doc["hyperparams"], doc["state"])


def dumps_model(model) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True, separators=(",", ":")) + "\n"


def save_model(model, path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def load_model(path):
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
