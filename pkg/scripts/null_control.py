"""Null-signal control: identical class parameters, held-out AUC per model.

    python3 scripts/null_control.py --seeds 0 1 2
"""
import argparse
import tempfile
from pathlib import Path

from readability_shift import run

from stylodetect.synth import SynthConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--n-per-class", type=int, default=250)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", type=Path, help="keep run directories here")
    args = ap.parse_args()
    with tempfile.TemporaryDirectory() as tmp:
        root = args.out or Path(tmp)
        for seed in args.seeds:
            report = run(root / f"seed{seed}", SynthConfig.null(seed, args.n_per_class), seed,
                         args.threads)
            models = report["evaluation"]["models"]
            aucs = "  ".join(f"{n} {r['auc']:.3f}" for n, r in sorted(models.items()))
            inside = all(0.40 <= r["auc"] <= 0.60 for r in models.values())
            print(f"seed {seed}: {aucs}  {'ok' if inside else 'OUTSIDE [0.40, 0.60]'}")


if __name__ == "__main__":
    main()
