"""Seeded random streams.

Every stochastic routine draws from a PCG64 generator built from a
``numpy.random.SeedSequence``. Child streams are derived by appending integer
keys to the spawn key, so the stream for ``(seed, N, trial)`` is fixed no
matter how many other streams were created before it or in which order.
"""
from __future__ import annotations

import numpy as np

SeedLike = "int | np.random.SeedSequence"


def seed_sequence(seed, *key: int) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        base = seed
    else:
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
            raise TypeError(f"seed must be a non-negative integer, got {seed!r}")
        base = np.random.SeedSequence(int(seed))
    if not key:
        return base
    return np.random.SeedSequence(
        base.entropy, spawn_key=tuple(base.spawn_key) + tuple(int(k) for k in key)
    )


def generator(seed, *key: int) -> np.random.Generator:
    """PCG64 generator for the child stream ``key`` of ``seed``."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *key)))
