"""Measured Coleman-Liau class shift of the readability-shift generator across seeds.

    python3 scripts/cli_shift.py --seeds 0 1 2 3 4
"""
import argparse

from stylodetect.dataset import build_matrix
from stylodetect.lexicon import fixture_lexicon
from stylodetect.synth import SynthConfig, generate_synthetic_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--n-per-class", type=int, default=250)
    args = ap.parse_args()
    lex = fixture_lexicon()
    for seed in args.seeds:
        m = build_matrix(generate_synthetic_corpus(SynthConfig.readability_shift(seed, args.n_per_class)), lex)
        cli = m.column("coleman_liau_index")
        ttr = m.column("type_token_ratio")
        print(f"seed {seed}: CLI shift {cli[m.labels == 0].mean() - cli[m.labels == 1].mean():+.3f}"
              f"  TTR shift {ttr[m.labels == 0].mean() - ttr[m.labels == 1].mean():+.4f}")


if __name__ == "__main__":
    main()
