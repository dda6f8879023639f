"""Multiplicative decompounding through the Mellin transform.

For ``Y_t = prod_{i <= N_t} X_i`` the increments over a step ``delta`` satisfy
``M[Z](s) = exp(lam * delta * (M[f](s) - 1))``. The jump transform is
recovered on the line ``Re s = c`` as ``1 + log M_hat / (lam * delta)`` with the
distinguished log, truncated where its modulus exceeds 4, and inverted with
a cutoff ``|t| <= m``.
"""

from dataclasses import dataclass, field
import math
from typing import Optional

import numpy as np

from .fourier import ImaginaryResidue, check_hermitian, inverse_transform, surviving_edge
from .grids import DensityEstimate, FrequencyGrid, XGrid, default_step
from .laws import Unsupported
from .spectral import (
    ComplexProfile,
    distinguished_log,
    mirror,
    mirror_derivative,
    weighted_transform_pair,
)

THRESHOLD_FORMS = ("additive", "exponential")
#: M_tilde is zeroed where |M_hat| exceeds this bound
MODULUS_BOUND = 4.0


class NonPositiveData(ValueError):
    pass


class NonPositiveX(ValueError):
    pass


@dataclass
class MellinProfile(ComplexProfile):
    """Profile over the imaginary coordinate ``t`` of ``s = c + i t``."""

    c: float = 1.0

    def replace(self, values):
        return MellinProfile(self.grid, values, self.hermitian, self.c)

    def restrict(self, m):
        sub, sl = self.grid.restrict(m)
        return MellinProfile(sub, self.values[sl].copy(), self.hermitian, self.c)


@dataclass(frozen=True)
class MellinConfig:
    """Parameters of the Mellin estimator.

    ``threshold_form`` selects ``kappa_{n,delta}``: ``"additive"`` is
    ``e^{2 delta} + kappa sqrt(log(n delta))``, ``"exponential"`` is
    ``e^{2 delta + kappa} sqrt(log(n delta))``.
    """

    c: float = 1.0
    lam: float = 1.0
    delta: float = 1.0
    m: float = 50.0
    kappa: float = 1.0
    alpha: float = 0.5
    freq_step: Optional[float] = None
    m_search: Optional[float] = None
    x_grid: XGrid = field(default_factory=lambda: XGrid(0.002, 1.5, 0.002))
    threshold_form: str = "additive"

    def __post_init__(self):
        if not (self.lam > 0 and self.delta > 0):
            raise ValueError("lambda and delta must be positive")
        if not self.m > 0:
            raise ValueError("m must be positive")
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if not (0 < self.alpha < 1):
            raise ValueError("alpha must lie in (0, 1)")
        if self.freq_step is not None and not self.freq_step > 0:
            raise ValueError("freq_step must be positive")
        if self.x_grid.start <= 0:
            raise NonPositiveX("the Mellin x grid must be strictly positive")
        if self.threshold_form not in THRESHOLD_FORMS:
            raise ValueError(f"threshold_form must be one of {THRESHOLD_FORMS}")

    def step_for(self, half_width):
        return self.freq_step if self.freq_step is not None else default_step(half_width)

    def grid(self, half_width=None):
        half_width = self.m if half_width is None else half_width
        return FrequencyGrid(half_width, self.step_for(half_width))

    def cap(self, n):
        return (n * self.delta) ** self.alpha

    def check_law(self, jump):
        """Raise if ``c`` is outside the fundamental strip of ``jump``."""
        jump.mellin(np.asarray(self.c + 0j))


def _logs(increments):
    z = np.asarray(increments, dtype=float).ravel()
    if z.size == 0:
        raise NonPositiveData("empty sample")
    if np.any(~(z > 0)):
        raise NonPositiveData("Mellin estimation needs strictly positive data")
    return z, np.log(z)


def empirical_mellin_pair(increments, c, grid):
    z, y = _logs(increments)
    w = z ** (c - 1.0) if c != 1.0 else None
    m, d = weighted_transform_pair(y, grid.positive, w)
    m[0] = np.mean(w) if w is not None else 1.0
    return (
        MellinProfile(grid, mirror(m), True, c),
        MellinProfile(grid, mirror_derivative(d), False, c),
    )


def empirical_mellin(increments, c, grid):
    """``(1/n) sum_k Z_k^{c - 1 + i t}`` on ``grid``."""
    z, y = _logs(increments)
    w = z ** (c - 1.0) if c != 1.0 else None
    m, _ = weighted_transform_pair(y, grid.positive, w, want_deriv=False)
    m[0] = np.mean(w) if w is not None else 1.0
    return MellinProfile(grid, mirror(m), True, c)


def empirical_mellin_derivative(increments, c, grid):
    """``(1/n) sum_k i log(Z_k) Z_k^{c - 1 + i t}``, the t-derivative of the above."""
    return empirical_mellin_pair(increments, c, grid)[1]


def mellin_distinguished_log(M, Mderiv):
    """Continuous log of ``M / M(0)`` along ``t``, anchored at 0.

    For ``c = 1`` and a probability sample ``M(0) = 1`` so this is ``log M``.
    """
    log = distinguished_log(M, Mderiv)
    return MellinProfile(log.grid, log.values, log.hermitian, getattr(M, "c", 1.0))


def estimate_jump_mellin(increments, cfg: MellinConfig, grid: Optional[FrequencyGrid] = None):
    """``M_tilde = M_hat * 1{|M_hat| <= 4}`` with ``M_hat = 1 + log M_hat[delta] / (lam delta)``."""
    grid = cfg.grid() if grid is None else grid
    M, d = empirical_mellin_pair(increments, cfg.c, grid)
    log = mellin_distinguished_log(M, d)
    hat = 1.0 + log.values / (cfg.lam * cfg.delta)
    tilde = np.where(np.abs(hat) <= MODULUS_BOUND, hat, 0.0)
    return MellinProfile(grid, tilde, log.hermitian, cfg.c)


def invert_mellin(profile: MellinProfile, x_grid, m=None, meta=None):
    """``(1/2pi) int_{-m}^{m} x^{-c - i t} profile(t) dt`` on a positive x grid."""
    check_hermitian(profile)
    x = x_grid.points if isinstance(x_grid, XGrid) else np.asarray(x_grid, dtype=float)
    if np.any(~(x > 0)):
        raise NonPositiveX("Mellin inversion needs x > 0")
    if m is not None:
        profile = profile.restrict(m)
    re, im = inverse_transform(profile.u, profile.values, profile.grid.step, np.log(x))
    scale = x ** (-profile.c)
    re, im = re * scale, im * scale
    bound = 1e-8 * (1.0 + np.max(np.abs(re), initial=0.0))
    if np.max(np.abs(im), initial=0.0) > bound:
        raise ImaginaryResidue(f"inverse Mellin transform has imaginary residue {np.max(np.abs(im)):.3g}")
    info = {"m": profile.grid.half_width, "c": profile.c}
    info.update(meta or {})
    return DensityEstimate(x, re, info)


def kappa_level(n, cfg: MellinConfig):
    nd = n * cfg.delta
    root = math.sqrt(max(math.log(nd), 0.0))
    if cfg.threshold_form == "additive":
        return math.exp(2 * cfg.delta) + cfg.kappa * root
    return math.exp(2 * cfg.delta + cfg.kappa) * root


def threshold_level(n, cfg: MellinConfig):
    """Level ``kappa_{n,delta} / sqrt(n delta)`` applied to ``|M_tilde|``."""
    return kappa_level(n, cfg) / math.sqrt(n * cfg.delta)


def threshold_mellin(profile: MellinProfile, n, cfg: MellinConfig):
    keep = np.abs(profile.values) >= threshold_level(n, cfg)
    return profile.replace(np.where(keep, profile.values, 0.0))


def adaptive_cutoff_mellin(profile: MellinProfile, n, cfg: MellinConfig, rule="last"):
    """Largest ``t`` where the thresholded transform survives, capped at ``(n delta)^alpha``.

    The threshold is applied here, so passing an already thresholded
    profile gives the same answer. Returns 0.0 when nothing survives.
    """
    pos = threshold_mellin(profile, n, cfg).positive
    return min(surviving_edge(pos, profile.grid.step, rule), cfg.cap(n))


def weighted_target(jump, m, x_grid, c=1.0, step=None):
    """Truncated Mellin inversion of the exact transform of ``jump``."""
    if not jump.has_density:
        raise Unsupported(f"{jump.literal()} is atomic and has no density")
    grid = FrequencyGrid(m, step if step is not None else default_step(m))
    t = grid.positive
    values = np.asarray(jump.mellin(c + 1j * t), dtype=complex)
    profile = MellinProfile(grid, mirror(values), True, c)
    return invert_mellin(profile, x_grid, meta={"law": jump.literal()})


@dataclass
class MellinEstimate:
    density: DensityEstimate
    transform: MellinProfile
    thresholded: Optional[MellinProfile] = None
    m_hat: Optional[float] = None


def estimate_mellin(increments, cfg: MellinConfig, adaptive=False, rule="last"):
    """Density estimate from multiplicative increments.

    With ``adaptive`` the cutoff is ``m_hat`` and the thresholded transform
    is inverted; otherwise ``cfg.m`` and ``M_tilde``.
    """
    n = np.size(increments)
    meta = {"n": n, "lambda": cfg.lam, "delta": cfg.delta}
    if not adaptive:
        tilde = estimate_jump_mellin(increments, cfg)
        return MellinEstimate(invert_mellin(tilde, cfg.x_grid, meta=meta), tilde)
    search = cfg.m_search if cfg.m_search is not None else cfg.cap(n)
    tilde = estimate_jump_mellin(increments, cfg, cfg.grid(search))
    bar = threshold_mellin(tilde, n, cfg)
    m_hat = adaptive_cutoff_mellin(bar, n, cfg, rule)
    meta["m_hat"] = m_hat
    if m_hat < bar.grid.step:
        x = cfg.x_grid.points
        density = DensityEstimate(x, np.zeros_like(x), dict(meta, m=0.0))
    else:
        density = invert_mellin(bar, cfg.x_grid, m=m_hat, meta=meta)
    return MellinEstimate(density, tilde, bar, m_hat)
