"""Seed handling.

Every random stream is a numpy ``PCG64`` generator (``np.random.default_rng``),
whose output for a given seed is fixed across platforms. Child seeds are
derived from a parent seed plus string/int keys via SHA-256, so that every
stage of a run can be re-seeded from one ``--seed`` value.
"""
from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(seed: int, *keys) -> int:
    material = ":".join([str(int(seed)), *map(str, keys)]).encode("utf-8")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "little")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
