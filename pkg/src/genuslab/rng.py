"""Deterministic random streams.

All sampling takes an explicit ``numpy.random.Generator``.  Streams are
PCG64 seeded through ``SeedSequence([seed, *stream_key])`` so campaign
workers get independent, schedule-free reproducible streams.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

RNG_NAME = "numpy-PCG64-SeedSequence/1"


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, stream)])))


def randbelow(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in ``[0, n)`` for arbitrarily large ``n``."""
    if n <= 0:
        raise ValueError("n must be positive")
    if n <= 2**62:
        return int(rng.integers(n))
    nbits = n.bit_length()
    nbytes = (nbits + 7) // 8
    excess = nbytes * 8 - nbits
    while True:
        value = int.from_bytes(rng.bytes(nbytes), "little") >> excess
        if value < n:
            return value


def weighted_index(rng: np.random.Generator, weights: Sequence[int]) -> int:
    """Index ``i`` drawn with probability ``weights[i] / sum(weights)`` (exact integers)."""
    total = sum(weights)
    r = randbelow(rng, total)
    for i, w in enumerate(weights):
        if r < w:
            return i
        r -= w
    raise AssertionError("unreachable")
