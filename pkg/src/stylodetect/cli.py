"""Command-line entry point: ``stylodetect <subcommand> [flags]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .dataset import write_corpus
from .errors import StyloError
from .pipeline import ALL_MODELS, RunConfig, run_pipeline, run_stage, summary_lines
from .synth import SynthConfig, generate_synthetic_corpus

PRESETS = {"default": SynthConfig, "readability-shift": SynthConfig.readability_shift, "null": SynthConfig.null}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--corpus", type=Path, help="corpus CSV (id,text,label[,pair_id])")
    p.add_argument("--lexicon", type=Path,
                   help="NRC-format emotion lexicon (default: bundled fixture lexicon)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split", type=float, default=0.8, help="training fraction")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--models", default=",".join(ALL_MODELS),
                   help=f"comma-separated subset of {','.join(ALL_MODELS)}")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--pair-safe", action="store_true",
                   help="keep each human/AI pair on one side of the split")
    p.add_argument("--feature", default="coleman_liau_index", help="feature for `density`")
    p.add_argument("--bins", type=int, default=30)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stylodetect", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="write a synthetic paired corpus")
    synth.add_argument("--out", type=Path, required=True, help="output directory")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--preset", choices=sorted(PRESETS), default="readability-shift")
    synth.add_argument("--config", type=Path, help="JSON file of SynthConfig fields")
    synth.add_argument("--n-per-class", type=int)

    for name, helptext in [
        ("extract", "corpus -> features.csv"),
        ("train", "split, standardize, cross-validate and fit models"),
        ("evaluate", "accuracy and AUC of every model on the held-out split"),
        ("feature-auc", "single-feature AUCs"),
        ("importance", "tree-model feature importances"),
        ("density", "per-class histogram density of one feature"),
        ("pipeline", "all of the above"),
    ]:
        _common(sub.add_parser(name, help=helptext))
    return parser


def _run_config(args) -> RunConfig:
    return RunConfig(
        out=args.out, corpus=args.corpus, lexicon=args.lexicon, seed=args.seed,
        train_fraction=args.split, threshold=args.threshold,
        models=tuple(m.strip() for m in args.models.split(",") if m.strip()),
        folds=args.folds, threads=args.threads, pair_safe=args.pair_safe,
        density_feature=args.feature, bins=args.bins,
    )


def _synth(args) -> None:
    if args.config is not None:
        cfg = SynthConfig.from_json(args.config.read_text(encoding="utf-8"))
        cfg.seed = args.seed
    else:
        cfg = PRESETS[args.preset](seed=args.seed)
    if args.n_per_class is not None:
        cfg.n_per_class = args.n_per_class
    docs = generate_synthetic_corpus(cfg)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "corpus.csv", "w", newline="", encoding="utf-8") as fh:
        write_corpus(docs, fh)
    (args.out / "synth_config.json").write_text(
        json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {len(docs)} documents to {args.out / 'corpus.csv'}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "synth":
            _synth(args)
            return 0
        cfg = _run_config(args)
        if args.command == "pipeline":
            report = run_pipeline(cfg)
        else:
            report = run_stage(args.command, cfg)
    except (StyloError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for line in summary_lines(report):
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
