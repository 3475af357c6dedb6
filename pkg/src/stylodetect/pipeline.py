"""Pipeline stages writing report artifacts into an output directory.

Stages and the files they own:

=============  ==============================================================
extract        ``features.csv``, ``extract.json``
train          ``split.json``, ``standardizer.json``, ``cv.json``,
               ``models/<family>.json``, ``models/ensemble.json``
evaluate       ``predictions.csv``, ``metrics.csv``, ``evaluation.json``
feature-auc    ``feature_auc.csv``
importance     ``importance_<family>.csv``
density        ``density_<feature>.csv``, ``density_<feature>.json``
=============  ==============================================================

Every stage finishes by rebuilding ``report.json`` from whatever artifacts
exist, so running the stages in order yields the same directory as
``run_pipeline``. All randomness comes from ``RunConfig.seed``.
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import (
    StandardizationParams,
    apply_manifest,
    apply_standardizer,
    build_matrix,
    fit_standardizer,
    load_corpus_path,
    read_matrix_csv,
    split_manifest,
    split_train_test,
    write_matrix_csv,
)
from .ensemble import load_ensemble, write_manifest
from .errors import ConfigInvalid
from .evaluation import accuracy, class_density, importance_report, per_feature_auc, roc_auc
from .features import FEATURE_NAMES
from .lexicon import fixture_lexicon, load_lexicon_path
from .models import (
    DEFAULT_GRIDS,
    FAMILIES,
    TREE_FAMILIES,
    cross_validate,
    fit_model,
    load_model,
    model_importance,
    save_model,
)
from .rng import derive_seed

log = logging.getLogger(__name__)

ALL_MODELS = FAMILIES + ("ensemble",)
FAILURE_MARKER = "FAILED"


@dataclass
class RunConfig:
    out: Path
    corpus: Path | None = None
    lexicon: Path | None = None
    seed: int = 0
    train_fraction: float = 0.8
    threshold: float = 0.5
    models: tuple[str, ...] = ALL_MODELS
    folds: int = 5
    threads: int = 1
    pair_safe: bool = False
    density_feature: str = "coleman_liau_index"
    bins: int = 30
    grids: dict = field(default_factory=lambda: dict(DEFAULT_GRIDS))

    def validate(self, need_corpus: bool = False) -> None:
        if need_corpus:
            if self.corpus is None:
                raise ConfigInvalid("--corpus is required")
            if not Path(self.corpus).is_file():
                raise ConfigInvalid(f"corpus file not found: {self.corpus}")
        if self.lexicon is not None and not Path(self.lexicon).is_file():
            raise ConfigInvalid(f"lexicon file not found: {self.lexicon}")
        if not 0 < self.train_fraction < 1:
            raise ConfigInvalid("--split must be in (0, 1)")
        if not 0 < self.threshold < 1:
            raise ConfigInvalid("--threshold must be in (0, 1)")
        if self.folds < 2:
            raise ConfigInvalid("--folds must be >= 2")
        if self.threads < 1:
            raise ConfigInvalid("--threads must be >= 1")
        unknown = set(self.models) - set(ALL_MODELS)
        if unknown:
            raise ConfigInvalid(f"unknown models {sorted(unknown)}; choose from {ALL_MODELS}")
        if "ensemble" in self.models and len(self.families) < 2:
            raise ConfigInvalid("the ensemble needs at least two base models")
        if self.density_feature not in FEATURE_NAMES:
            raise ConfigInvalid(f"unknown feature {self.density_feature!r}")

    @property
    def families(self) -> tuple[str, ...]:
        return tuple(m for m in FAMILIES if m in self.models)

    def metadata(self) -> dict:
        return {
            "seed": self.seed,
            "train_fraction": self.train_fraction,
            "threshold": self.threshold,
            "models": list(self.models),
            "folds": self.folds,
            "pair_safe": self.pair_safe,
            "grids": {f: self.grids[f] for f in self.families},
        }


# -- small I/O helpers ---------------------------------------------------------

def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _read_json(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(x: float) -> str:
    return repr(float(x))


def _lexicon(cfg: RunConfig):
    return fixture_lexicon() if cfg.lexicon is None else load_lexicon_path(cfg.lexicon)


def _require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise ConfigInvalid(f"{path.name} not found in {path.parent}; run `{stage}` first")
    return path


def _features(cfg: RunConfig):
    with open(_require(cfg.out / "features.csv", "extract"), newline="", encoding="utf-8") as fh:
        return read_matrix_csv(fh)


# -- stages -------------------------------------------------------------------

def stage_extract(cfg: RunConfig) -> None:
    corpus = load_corpus_path(cfg.corpus)
    lex = _lexicon(cfg)
    m = build_matrix(corpus.documents, lex, threads=cfg.threads)
    with open(cfg.out / "features.csv", "w", newline="", encoding="utf-8") as fh:
        write_matrix_csv(m, fh)
    human, ai = m.class_counts()
    _write_json(cfg.out / "extract.json", {
        "n_documents": len(m), "n_human": human, "n_ai": ai, "dropped_empty": corpus.dropped,
        "lexicon_words": len(lex), "feature_names": list(FEATURE_NAMES),
    })
    log.info("extracted %d documents (%d dropped as empty)", len(m), corpus.dropped)


def stage_train(cfg: RunConfig) -> None:
    m = _features(cfg)
    if cfg.pair_safe:
        if cfg.corpus is None:
            raise ConfigInvalid("--pair-safe needs --corpus to read pair ids")
        pairs = {d.id: d.pair_id for d in load_corpus_path(cfg.corpus).documents}
        m.pair_ids = [pairs.get(i) for i in m.ids]
    split_seed = derive_seed(cfg.seed, "split")
    train, test = split_train_test(m, cfg.train_fraction, split_seed, pair_safe=cfg.pair_safe)
    _write_json(cfg.out / "split.json",
                split_manifest(train, test, split_seed, cfg.train_fraction, cfg.pair_safe))

    params = fit_standardizer(train)
    (cfg.out / "standardizer.json").write_text(params.dumps(), encoding="utf-8")
    Xtr = apply_standardizer(params, train)

    models_dir = cfg.out / "models"
    models_dir.mkdir(exist_ok=True)
    cv_report = {}
    for family in cfg.families:
        cv = cross_validate(Xtr.rows, Xtr.labels, family, cfg.grids[family], k=cfg.folds,
                            seed=derive_seed(cfg.seed, "cv", family), threads=cfg.threads)
        cv_report[family] = cv.to_dict()
        model = fit_model(family, Xtr.rows, Xtr.labels, cv.best,
                          seed=derive_seed(cfg.seed, "model", family), threads=cfg.threads)
        save_model(model, models_dir / f"{family}.json")
        log.info("%s: selected %s", family, cv.best)
    _write_json(cfg.out / "cv.json", cv_report)
    if "ensemble" in cfg.models:
        write_manifest(models_dir / "ensemble.json", [f"{f}.json" for f in cfg.families],
                       cfg.threshold)


def _test_matrix(cfg: RunConfig):
    m = _features(cfg)
    _, test = apply_manifest(m, _read_json(_require(cfg.out / "split.json", "train")))
    params = StandardizationParams.from_dict(_read_json(cfg.out / "standardizer.json"))
    return apply_standardizer(params, test)


def stage_evaluate(cfg: RunConfig) -> None:
    test = _test_matrix(cfg)
    models_dir = cfg.out / "models"
    probs: dict[str, np.ndarray] = {}
    for family in cfg.families:
        probs[family] = load_model(_require(models_dir / f"{family}.json", "train")).predict_proba(test.rows)
    if "ensemble" in cfg.models:
        ens = load_ensemble(_require(models_dir / "ensemble.json", "train"))
        probs["ensemble"] = ens.predict_proba(test.rows)
        threshold = ens.threshold
    else:
        threshold = cfg.threshold

    results = {}
    for name, p in probs.items():
        roc = roc_auc(p, test.labels)
        results[name] = {
            "accuracy": accuracy((p > threshold).astype(np.int64), test.labels),
            "auc": roc.auc,
            "roc": [list(pt) for pt in roc.points],
        }
    names = list(probs)
    _write_csv(cfg.out / "predictions.csv", ["id", "label", *names],
               [[i, int(lab), *(_fmt(probs[n][r]) for n in names)]
                for r, (i, lab) in enumerate(zip(test.ids, test.labels))])
    _write_csv(cfg.out / "metrics.csv", ["model", "accuracy", "auc"],
               [[n, _fmt(results[n]["accuracy"]), _fmt(results[n]["auc"])] for n in names])
    _write_json(cfg.out / "evaluation.json",
                {"threshold": threshold, "n_test": len(test), "models": results})


def stage_feature_auc(cfg: RunConfig) -> None:
    rows = per_feature_auc(_features(cfg))
    _write_csv(cfg.out / "feature_auc.csv", ["feature", "raw_auc", "oriented_auc"],
               [[r.feature, _fmt(r.raw_auc), _fmt(r.oriented_auc)] for r in rows])


def stage_importance(cfg: RunConfig) -> None:
    importances = {}
    for family in TREE_FAMILIES:
        if family in cfg.families:
            model = load_model(_require(cfg.out / "models" / f"{family}.json", "train"))
            importances[family] = model_importance(model)
    report = importance_report(importances, FEATURE_NAMES)
    for family, rows in report.items():
        _write_csv(cfg.out / f"importance_{family}.csv", ["rank", "feature", "importance", "scaled"],
                   [[k + 1, f, _fmt(v), _fmt(s)] for k, (f, v, s) in enumerate(rows)])


def stage_density(cfg: RunConfig) -> None:
    d = class_density(_features(cfg), cfg.density_feature, cfg.bins)
    _write_csv(cfg.out / f"density_{d.feature}.csv",
               ["bin_left", "bin_right", "human_density", "ai_density"],
               [[_fmt(d.edges[k]), _fmt(d.edges[k + 1]), _fmt(d.human_density[k]),
                 _fmt(d.ai_density[k])] for k in range(len(d.human_density))])
    _write_json(cfg.out / f"density_{d.feature}.json", d.to_dict())


def _read_csv(path: Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def assemble_report(cfg: RunConfig) -> dict:
    """Collect the artifacts present in ``cfg.out`` into ``report.json``."""
    out = cfg.out
    report: dict = {"metadata": cfg.metadata()}
    if (out / "extract.json").exists():
        report["corpus"] = _read_json(out / "extract.json")
    if (out / "split.json").exists():
        split = _read_json(out / "split.json")
        report["split"] = {k: v for k, v in split.items() if k != "assignment"}
    if (out / "cv.json").exists():
        report["cross_validation"] = _read_json(out / "cv.json")
    if (out / "evaluation.json").exists():
        report["evaluation"] = _read_json(out / "evaluation.json")
    if (out / "feature_auc.csv").exists():
        report["feature_auc"] = [
            {"feature": r["feature"], "raw_auc": float(r["raw_auc"]),
             "oriented_auc": float(r["oriented_auc"])}
            for r in _read_csv(out / "feature_auc.csv")]
    importance = {}
    for family in TREE_FAMILIES:
        path = out / f"importance_{family}.csv"
        if path.exists():
            importance[family] = [
                {"feature": r["feature"], "importance": float(r["importance"]),
                 "scaled": float(r["scaled"])} for r in _read_csv(path)]
    if importance:
        report["importance"] = importance
    densities = {}
    for path in sorted(out.glob("density_*.json")):
        d = _read_json(path)
        densities[d["feature"]] = d
    if densities:
        report["density"] = densities
    _write_json(out / "report.json", report)
    return report


STAGES = {
    "extract": stage_extract,
    "train": stage_train,
    "evaluate": stage_evaluate,
    "feature-auc": stage_feature_auc,
    "importance": stage_importance,
    "density": stage_density,
}
PIPELINE_ORDER = ("extract", "train", "evaluate", "feature-auc", "importance", "density")


def run_stage(name: str, cfg: RunConfig) -> dict:
    """Run one stage, then refresh ``report.json``.

    On any error a ``FAILED`` marker holding the diagnostic is written next
    to the partial artifacts, and the error is re-raised.
    """
    cfg.validate(need_corpus=(name == "extract"))
    cfg.out.mkdir(parents=True, exist_ok=True)
    marker = cfg.out / FAILURE_MARKER
    if marker.exists():
        marker.unlink()
    try:
        STAGES[name](cfg)
        return assemble_report(cfg)
    except Exception as exc:
        marker.write_text(f"stage {name} failed: {type(exc).__name__}: {exc}\n", encoding="utf-8")
        raise


def run_pipeline(cfg: RunConfig) -> dict:
    cfg.validate(need_corpus=True)
    report = {}
    for name in PIPELINE_ORDER:
        report = run_stage(name, cfg)
    return report


def summary_lines(report: dict) -> list[str]:
    lines = []
    ev = report.get("evaluation", {}).get("models", {})
    for name, r in ev.items():
        lines.append(f"{name:18s} accuracy {r['accuracy']:.3f}  auc {r['auc']:.3f}")
    fa = sorted(report.get("feature_auc", []), key=lambda r: (-r["oriented_auc"], r["feature"]))
    if fa:
        top = ", ".join(f"{r['feature']} {r['oriented_auc']:.3f}" for r in fa[:3])
        lines.append(f"top single-feature AUC: {top}")
    return lines

