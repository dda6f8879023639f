"""Uniform frequency and spatial grids, and the density-on-a-grid container."""

from dataclasses import dataclass, field
import math

import numpy as np


class GridMismatch(ValueError):
    pass


def default_step(half_width):
    """Default frequency step ``min(0.01, m / 1000)``."""
    return min(0.01, half_width / 1000.0)


@dataclass(frozen=True)
class FrequencyGrid:
    """Symmetric grid ``u_k = k * step`` for ``k = -K..K`` with ``K * step = half_width``.

    If ``half_width`` is not a multiple of the requested step, the step is
    shrunk to the nearest value that makes it one.
    """

    half_width: float
    step: float

    def __post_init__(self):
        if not (self.half_width > 0 and math.isfinite(self.half_width)):
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ValueError(f"step must be positive, got {self.step}")
        ratio = self.half_width / self.step
        K = round(ratio)
        if K < 1 or abs(K - ratio) > 1e-9 * max(1.0, ratio):
            K = max(1, math.ceil(ratio))
            object.__setattr__(self, "step", self.half_width / K)

    @classmethod
    def with_default_step(cls, half_width):
        return cls(half_width, default_step(half_width))

    @property
    def K(self):
        return round(self.half_width / self.step)

    @property
    def size(self):
        return 2 * self.K + 1

    @property
    def points(self):
        return np.arange(-self.K, self.K + 1) * self.step

    @property
    def positive(self):
        """Nonnegative half ``u_0 = 0, ..., u_K = half_width``."""
        return np.arange(0, self.K + 1) * self.step

    def restrict(self, m):
        """Sub-grid with the same step covering ``|u| <= m``.

        Returns the new grid and the slice selecting it from ``points``.
        """
        k = min(self.K, math.floor(m / self.step + 1e-9))
        if k < 1:
            raise ValueError(f"cutoff {m} is below one grid step ({self.step})")
        sub = FrequencyGrid(k * self.step, self.step)
        return sub, slice(self.K - k, self.K + k + 1)

    def same_as(self, other):
        return self.K == other.K and self.step == other.step


@dataclass(frozen=True)
class XGrid:
    """Uniform grid on ``[start, stop]`` with the given step."""

    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("x step must be positive")
        if not self.stop > self.start:
            raise ValueError("x grid needs stop > start")

    @property
    def count(self):
        return int(round((self.stop - self.start) / self.step)) + 1

    @property
    def points(self):
        return self.start + self.step * np.arange(self.count)


@dataclass
class DensityEstimate:
    """Real density values on a uniform x grid."""

    x: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.x.shape != self.values.shape or self.x.ndim != 1:
            raise ValueError("x and values must be 1-d arrays of equal length")
        if self.x.size >= 3:
            dx = np.diff(self.x)
            if np.max(np.abs(dx - dx[0])) > 1e-9 * max(1.0, abs(dx[0])):
                raise ValueError("x grid is not uniform")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("density values must be finite")

    @property
    def step(self):
        return float(self.x[1] - self.x[0])

    def check_same_grid(self, other):
        if self.x.shape != other.x.shape or not np.allclose(self.x, other.x, rtol=0, atol=1e-12):
            raise GridMismatch("density estimates live on different x grids")


def trapezoid_weights(n, step):
    w = np.full(n, step)
    w[0] = w[-1] = step / 2
    return w
