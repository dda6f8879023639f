"""Simulators for the noisy additive panel and the multiplicative increments.

Both simulators split their output into fixed-size blocks (channels for the
panel, increments for the multiplicative model), each drawn from its own
substream of the master seed. Output therefore does not depend on how many
blocks are generated at once or in which order.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .laws import Law
from .rng import substream

BLOCK = 4096


class EmptyTimes(ValueError):
    pass


class NonPositiveTime(ValueError):
    pass


class NonPositiveJumpSupport(ValueError):
    pass


@dataclass
class Panel:
    """``J x n`` observations ``Z^j_{t_i}``; row j is channel j.

    ``delta`` is set when the times form the regular grid ``(i + 1) * delta``
    and is ``None`` otherwise (e.g. the two-time design ``t1 = 0.2, t2 = 1``).
    """

    observations: np.ndarray
    times: np.ndarray
    delta: Optional[float] = None
    counts: Optional[np.ndarray] = None

    @property
    def J(self):
        return self.observations.shape[0]

    @property
    def n(self):
        return self.observations.shape[1]

    def column(self, t):
        """Observations of every channel at time ``t``."""
        idx = np.flatnonzero(np.isclose(self.times, t, rtol=0, atol=1e-12))
        if idx.size == 0:
            raise KeyError(f"time {t} is not in the panel")
        return self.observations[:, idx[0]]


@dataclass
class IncrementSample:
    """Multiplicative increments ``Y_{k delta} / Y_{(k-1) delta}``."""

    increments: np.ndarray
    delta: float
    lam: float

    @property
    def n(self):
        return self.increments.size


def _seed_from(rng):
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(0, 2**63))
    return int(rng)


def _check_times(times):
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size == 0:
        raise EmptyTimes("at least one observation time is required")
    if np.any(times <= 0):
        raise NonPositiveTime("observation times must be positive")
    if np.any(np.diff(times) <= 0):
        raise ValueError("observation times must be strictly increasing")
    return times


def _regular_delta(times):
    d = times[0]
    expected = d * np.arange(1, times.size + 1)
    return float(d) if np.allclose(times, expected, rtol=0, atol=1e-12) else None


def _compound_sums(jump, counts, rng):
    """Sum ``counts[k]`` fresh jumps for every cell k (flattened order)."""
    flat = counts.ravel()
    total = int(flat.sum())
    jumps = jump.sample(total, rng)
    owner = np.repeat(np.arange(flat.size), flat)
    return np.bincount(owner, weights=jumps, minlength=flat.size).reshape(counts.shape)


def sample_panel(jump: Law, noise: Law, J, times, rng, keep_counts=False):
    """Simulate ``Z^j_t = sum_{k <= N^j_t} X^j_k + eps^j_t`` with unit intensity.

    Poisson counts are drawn as independent increments over the consecutive
    intervals ``(t_{i-1}, t_i]``, so each channel carries a single consistent
    path. Noise is drawn afresh for every (channel, time) cell.

    Parameters
    ----------
    jump, noise : Law
        Jump-size and additive-noise laws.
    J : int
        Number of independent channels.
    times : array_like
        Strictly increasing positive observation times.
    rng : int or numpy.random.Generator
        Master seed (or a generator that supplies one).
    keep_counts : bool
        Also return the cumulative jump counts ``N^j_t``.
    """
    times = _check_times(times)
    J = int(J)
    if J < 1:
        raise ValueError("J must be a positive integer")
    seed = _seed_from(rng)
    widths = np.diff(np.concatenate([[0.0], times]))
    obs = np.empty((J, times.size))
    counts = np.empty((J, times.size), dtype=np.int64) if keep_counts else None
    for b, start in enumerate(range(0, J, BLOCK)):
        stop = min(J, start + BLOCK)
        g = substream(seed, 0, b)
        k = g.poisson(widths, size=(stop - start, times.size))
        y = np.cumsum(_compound_sums(jump, k, g), axis=1)
        eps = noise.sample(k.size, g).reshape(k.shape)
        obs[start:stop] = y + eps
        if keep_counts:
            counts[start:stop] = np.cumsum(k, axis=1)
    return Panel(obs, times, _regular_delta(times), counts)


def sample_increments(jump: Law, lam, delta, n, rng):
    """Simulate ``n`` increments of ``Y_t = prod_{i <= N_t} X_i``.

    Each increment is the product of ``Poisson(lam * delta)`` fresh jumps; an
    empty product is 1. Products are formed by sequential multiplication so
    point-mass jumps give exact powers.
    """
    if not jump.positive_support:
        raise NonPositiveJumpSupport(f"{jump.literal()} can emit values <= 0")
    if not (lam > 0 and delta > 0):
        raise ValueError("lambda and delta must be positive")
    n = int(n)
    if n < 1:
        raise ValueError("n must be a positive integer")
    seed = _seed_from(rng)
    out = np.ones(n)
    for b, start in enumerate(range(0, n, BLOCK)):
        stop = min(n, start + BLOCK)
        g = substream(seed, 1, b)
        k = g.poisson(lam * delta, size=stop - start)
        x = jump.sample(int(k.sum()), g)
        hit = np.flatnonzero(k)
        if hit.size:
            offsets = np.concatenate([[0], np.cumsum(k[hit])[:-1]])
            out[start + hit] = np.multiply.reduceat(x, offsets)
    return IncrementSample(out, float(delta), float(lam))
