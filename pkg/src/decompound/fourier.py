"""Two-time Fourier estimator of the jump density under unknown noise.

With unit intensity, ``phi_Z(t) = exp(t (phi_X - 1)) * phi_eps`` and the noise
cancels in the ratio of two times, so::

    phi_X = 1 + (log phi_Z(t2) - log phi_Z(t1)) / (t2 - t1)

with ``log`` the distinguished logarithm. Each empirical log is zeroed where
its modulus exceeds ``ln J`` before being combined, and the density is the
inverse Fourier transform truncated at ``|u| <= m``.
"""

from dataclasses import dataclass, field
import math
from typing import Optional

import numpy as np

from .grids import DensityEstimate, FrequencyGrid, XGrid, default_step, trapezoid_weights
from .spectral import ComplexProfile, distinguished_log, empirical_cf_pair

KAPPA_FORMS = ("definition", "proof")
CUTOFF_RULES = ("last", "first")


class DegenerateTimes(ValueError):
    pass


class MismatchedChannelCounts(ValueError):
    pass


class NonHermitianInput(ValueError):
    pass


class ImaginaryResidue(ArithmeticError):
    pass


@dataclass(frozen=True)
class FourierConfig:
    """Parameters of the two-time estimator.

    ``m`` is the spectral cutoff for a fixed-cutoff estimate. In adaptive mode
    the frequency search runs up to ``m_search`` (default: the cap
    ``(J (t2 - t1)^2)^alpha``). ``kappa_form`` picks the leading constant of
    the threshold: ``"definition"`` uses ``2 e^{2 t2}``, ``"proof"`` uses
    ``2 sqrt(2) e^{2 t2}``.
    """

    t1: float = 0.5
    t2: float = 1.0
    m: float = 2.0
    kappa: float = 1.0
    alpha: float = 0.5
    freq_step: Optional[float] = None
    m_search: Optional[float] = None
    x_grid: XGrid = field(default_factory=lambda: XGrid(-10.0, 10.0, 0.01))
    kappa_form: str = "definition"

    def __post_init__(self):
        if not (self.t1 > 0):
            raise ValueError("t1 must be positive")
        if not (self.t2 > self.t1):
            raise DegenerateTimes("t2 must exceed t1")
        if not (self.m > 0):
            raise ValueError("m must be positive")
        if not (self.kappa > 0):
            raise ValueError("kappa must be positive")
        if not (0 < self.alpha < 1):
            raise ValueError("alpha must lie in (0, 1)")
        if self.freq_step is not None and not self.freq_step > 0:
            raise ValueError("freq_step must be positive")
        if self.kappa_form not in KAPPA_FORMS:
            raise ValueError(f"kappa_form must be one of {KAPPA_FORMS}")

    @property
    def gap(self):
        return self.t2 - self.t1

    def step_for(self, half_width):
        return self.freq_step if self.freq_step is not None else default_step(half_width)

    def grid(self, half_width=None):
        half_width = self.m if half_width is None else half_width
        return FrequencyGrid(half_width, self.step_for(half_width))

    def cap(self, J):
        """Upper bound ``(J (t2 - t1)^2)^alpha`` on the adaptive cutoff."""
        return (J * self.gap**2) ** self.alpha


def kappa_level(J, cfg):
    """``kappa_{J,t1,t2} = C e^{2 t2} + kappa sqrt(ln(J (t2 - t1)^2))``."""
    lead = 2.0 if cfg.kappa_form == "definition" else 2.0 * math.sqrt(2.0)
    log_term = math.log(J * cfg.gap**2)
    return lead * math.exp(2 * cfg.t2) + cfg.kappa * math.sqrt(max(log_term, 0.0))


def threshold_level(J, cfg):
    """Level ``kappa_{J,t1,t2} / (sqrt(J) (t2 - t1))`` for ``|phi| / sqrt(1 + u^2)``."""
    return kappa_level(J, cfg) / (math.sqrt(J) * cfg.gap)


def truncated_log(data, grid):
    """Distinguished log of the empirical CF, zeroed where ``|log| > ln J``."""
    data = np.asarray(data, dtype=float)
    cf, deriv = empirical_cf_pair(data, grid)
    log = distinguished_log(cf, deriv)
    keep = np.abs(log.values) <= math.log(data.size)
    return log.replace(np.where(keep, log.values, 0.0))


def estimate_jump_cf(panel_t1, panel_t2, cfg: FourierConfig, grid: Optional[FrequencyGrid] = None):
    """Estimate ``phi_X`` on ``grid`` from the channel values at ``t1`` and ``t2``.

    Returns the Hermitian profile
    ``1 + (trunc log phi_hat(t2) - trunc log phi_hat(t1)) / (t2 - t1)``.
    """
    z1 = np.asarray(panel_t1, dtype=float).ravel()
    z2 = np.asarray(panel_t2, dtype=float).ravel()
    if z1.size != z2.size:
        raise MismatchedChannelCounts(f"{z1.size} channels at t1 but {z2.size} at t2")
    if z1.size < 2:
        raise ValueError("at least two channels are required")
    if cfg.t2 == cfg.t1:
        raise DegenerateTimes("t1 and t2 coincide")
    grid = cfg.grid() if grid is None else grid
    l1 = truncated_log(z1, grid)
    l2 = truncated_log(z2, grid)
    values = 1.0 + (l2.values - l1.values) / cfg.gap
    return ComplexProfile(grid, values, hermitian=l1.hermitian and l2.hermitian)


def check_hermitian(profile, rtol=1e-12):
    v = profile.values
    scale = 1.0 + np.max(np.abs(v), initial=0.0)
    if np.max(np.abs(v[::-1] - np.conj(v)), initial=0.0) > rtol * scale:
        raise NonHermitianInput("profile is not Hermitian")


def inverse_transform(u, values, step, y):
    """Trapezoid approximation of ``(1/2pi) int e^{-i u y} values(u) du``.

    Returns real and imaginary parts separately, for every point of ``y``.
    When ``y`` is uniform the kernel rows are built from block anchors times
    precomputed phase powers instead of one exponential per cell.
    """
    y = np.asarray(y, dtype=float)
    wv = trapezoid_weights(u.size, step) / (2 * math.pi) * values
    out = np.empty(y.size, dtype=complex)
    dy = np.diff(y)
    uniform = y.size > 2 and np.max(np.abs(dy - dy[0])) <= 1e-12 * max(1.0, abs(dy[0]))
    if uniform:
        block = int(min(y.size, math.isqrt(y.size) + 1, max(1, (1 << 21) // max(u.size, 1))))
        powers = np.exp(-1j * np.outer(np.arange(block) * dy[0], u))
        for s in range(0, y.size, block):
            stop = min(y.size, s + block)
            out[s:stop] = (powers[: stop - s] * np.exp(-1j * y[s] * u)) @ wv
    else:
        chunk = max(1, (1 << 21) // max(u.size, 1))
        for s in range(0, y.size, chunk):
            out[s:s + chunk] = np.exp(-1j * np.outer(y[s:s + chunk], u)) @ wv
    return out.real, out.imag


def _real_part(re, im):
    bound = 1e-8 * (1.0 + np.max(np.abs(re), initial=0.0))
    if np.max(np.abs(im), initial=0.0) > bound:
        raise ImaginaryResidue(f"inverse transform has imaginary residue {np.max(np.abs(im)):.3g}")
    return re


def invert_to_density(profile: ComplexProfile, x_grid, m=None, meta=None):
    """``(1/2pi) int_{-m}^{m} e^{-iux} profile(u) du`` on ``x_grid``.

    ``m`` defaults to the half-width of the profile's grid. No positivity
    or normalisation is imposed on the result.
    """
    check_hermitian(profile)
    if m is not None:
        profile = profile.restrict(m)
    x = x_grid.points if isinstance(x_grid, XGrid) else np.asarray(x_grid, dtype=float)
    re, im = inverse_transform(profile.u, profile.values, profile.grid.step, x)
    info = {"m": profile.grid.half_width}
    info.update(meta or {})
    return DensityEstimate(x, _real_part(re, im), info)


def truncated_target_density(jump, m, x_grid, step=None):
    """Truncated inversion ``f_m`` of the exact characteristic function."""
    grid = FrequencyGrid(m, step if step is not None else default_step(m))
    profile = ComplexProfile(grid, jump.cf(grid.points), hermitian=True)
    return invert_to_density(profile, x_grid, meta={"law": jump.literal()})


def threshold_cf(profile: ComplexProfile, J, cfg: FourierConfig):
    """Zero the profile where ``|phi| / sqrt(1 + u^2)`` falls below the level."""
    level = threshold_level(J, cfg)
    keep = np.abs(profile.values) / np.sqrt(1.0 + profile.u**2) >= level
    return profile.replace(np.where(keep, profile.values, 0.0))


def surviving_edge(positive, step, rule="last"):
    """Frequency of the last nonzero value on ``u >= 0``.

    ``rule="last"`` takes the largest surviving frequency anywhere on the
    grid. ``rule="first"`` stops at the end of the run that starts at
    ``u = 0``, ignoring isolated survivors further out. Returns 0.0 when
    nothing survives.
    """
    if rule not in CUTOFF_RULES:
        raise ValueError(f"rule must be one of {CUTOFF_RULES}")
    alive = positive != 0
    if rule == "first":
        dead = np.flatnonzero(~alive)
        stop = dead[0] if dead.size else alive.size
        alive = alive.copy()
        alive[stop:] = False
    idx = np.flatnonzero(alive)
    return float(idx[-1] * step) if idx.size else 0.0


def adaptive_cutoff(profile: ComplexProfile, J, cfg: FourierConfig, rule="last"):
    """Largest frequency where the thresholded profile survives, capped.

    Returns 0.0 when nothing survives.
    """
    return min(surviving_edge(profile.positive, profile.grid.step, rule), cfg.cap(J))


@dataclass
class FourierEstimate:
    density: DensityEstimate
    cf: ComplexProfile
    thresholded: Optional[ComplexProfile] = None
    m_hat: Optional[float] = None


def zero_density(x_grid, meta=None):
    x = x_grid.points if isinstance(x_grid, XGrid) else np.asarray(x_grid, dtype=float)
    return DensityEstimate(x, np.zeros_like(x), dict(meta or {}))


def estimate_fourier(panel_t1, panel_t2, cfg: FourierConfig, adaptive=False, rule="last"):
    """Full pipeline from two panel columns to a density estimate.

    With ``adaptive`` the cutoff is ``m_hat`` and the inversion uses the
    thresholded transform; otherwise ``cfg.m`` and the truncated estimate.
    """
    J = np.size(panel_t1)
    meta = {"J": J, "t1": cfg.t1, "t2": cfg.t2}
    if not adaptive:
        cf = estimate_jump_cf(panel_t1, panel_t2, cfg)
        return FourierEstimate(invert_to_density(cf, cfg.x_grid, meta=meta), cf)
    search = cfg.m_search if cfg.m_search is not None else cfg.cap(J)
    cf = estimate_jump_cf(panel_t1, panel_t2, cfg, cfg.grid(search))
    bar = threshold_cf(cf, J, cfg)
    m_hat = adaptive_cutoff(bar, J, cfg, rule)
    meta["m_hat"] = m_hat
    if m_hat < bar.grid.step:
        density = zero_density(cfg.x_grid, dict(meta, m=0.0))
    else:
        density = invert_to_density(bar, cfg.x_grid, m=m_hat, meta=meta)
    return FourierEstimate(density, cf, bar, m_hat)
