"""Seeded, splittable random streams.

A stream is identified by a master seed and a tuple of integer indices, so
any replicate or channel block can be regenerated on its own without
replaying the streams before it.
"""

import os

import numpy as np

SEED_ENV = "DECOMPOUND_SEED"
DEFAULT_SEED = 20240101


def substream(seed, *index):
    """Return an independent generator for ``(seed, *index)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(i) for i in index))
    return np.random.Generator(np.random.PCG64(ss))


def resolve_seed(seed=None):
    """Explicit seed, else ``$DECOMPOUND_SEED``, else the package default."""
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env)
    return DEFAULT_SEED


def as_generator(rng):
    """Accept a Generator, an int seed or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
