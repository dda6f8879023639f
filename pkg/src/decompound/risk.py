"""Norms, Monte-Carlo MISE and parameter sweeps.

Every replicate draws from its own substream ``(seed, 2, r)`` and the
replicate losses are reduced in index order, so results do not depend on
the number of worker threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import math
from typing import Optional

import numpy as np

from .fourier import (
    FourierConfig,
    adaptive_cutoff,
    estimate_jump_cf,
    invert_to_density,
    threshold_cf,
    truncated_log,
    zero_density,
)
from .grids import DensityEstimate, GridMismatch, trapezoid_weights
from .laws import Law, analytic_density
from .mellin import (
    MellinConfig,
    NonPositiveX,
    adaptive_cutoff_mellin,
    estimate_jump_mellin,
    invert_mellin,
    threshold_mellin,
)
from .rng import resolve_seed, substream
from .simulate import sample_increments, sample_panel
from .spectral import ComplexProfile

REPLICATE_STREAM = 2


class EmptySweep(ValueError):
    pass


class T2NotAboveT1(ValueError):
    pass


def l2_distance(est: DensityEstimate, truth: DensityEstimate):
    """Squared L2 distance ``int (est - truth)^2 dx`` by the trapezoid rule."""
    est.check_same_grid(truth)
    d = est.values - truth.values
    return float(np.dot(trapezoid_weights(d.size, est.step), d * d))


def weighted_l2_distance(est: DensityEstimate, truth: DensityEstimate, c=1.0):
    """Squared ``omega_c`` distance ``int (est - truth)^2 x^{2c - 1} dx``."""
    est.check_same_grid(truth)
    if np.any(est.x <= 0):
        raise NonPositiveX("the omega_c norm needs a positive x grid")
    d = est.values - truth.values
    return float(np.dot(trapezoid_weights(d.size, est.step), d * d * est.x ** (2 * c - 1)))


def run_replicates(task, replicates, seed, threads=1):
    """Evaluate ``task(rng)`` once per replicate; results come back in index order."""
    seed = resolve_seed(seed)
    rngs = [substream(seed, REPLICATE_STREAM, r) for r in range(replicates)]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(task, rngs))
    return [task(g) for g in rngs]


def _mean_stderr(losses):
    losses = np.asarray(losses, dtype=float)
    mean = losses.sum(axis=0) / losses.shape[0]
    if losses.shape[0] < 2:
        return mean, np.zeros_like(mean)
    return mean, losses.std(axis=0, ddof=1) / math.sqrt(losses.shape[0])


def mise_monte_carlo(pipeline, truth, replicates, rng=None, threads=1, loss=l2_distance):
    """Mean and standard error of ``loss(pipeline(rng), truth)`` over replicates.

    ``pipeline`` maps a fresh ``numpy.random.Generator`` to a DensityEstimate.
    """
    if replicates < 2:
        raise ValueError("at least two replicates are needed for a standard error")
    losses = run_replicates(lambda g: loss(pipeline(g), truth), replicates, rng, threads)
    mean, se = _mean_stderr(losses)
    return float(mean), float(se)


@dataclass
class RiskReport:
    """MISE and its Monte-Carlo standard error along a swept parameter."""

    parameter: str
    values: list
    mise: np.ndarray
    stderr: np.ndarray
    replicates: int
    config: dict = field(default_factory=dict)
    losses: Optional[np.ndarray] = None
    extra: dict = field(default_factory=dict)

    @property
    def argmin(self):
        return self.values[int(np.argmin(self.mise))]

    def rows(self):
        return zip(self.values, self.mise, self.stderr)


# settings


@dataclass(frozen=True)
class FourierSetting:
    """Noisy additive panel observed at ``t1`` and ``t2``, Fourier estimator."""

    jump: Law
    noise: Law
    J: int
    config: FourierConfig
    cutoff_rule: str = "last"

    def truth(self):
        x = self.config.x_grid.points
        return DensityEstimate(x, analytic_density(self.jump, x))

    def loss(self, est, truth):
        return l2_distance(est, truth)

    def simulate(self, rng, times=None):
        times = (self.config.t1, self.config.t2) if times is None else times
        return sample_panel(self.jump, self.noise, self.J, times, rng)

    def transform(self, data, half_width):
        cfg = self.config
        return estimate_jump_cf(data.column(cfg.t1), data.column(cfg.t2), cfg, cfg.grid(half_width))

    def invert(self, profile, m):
        return invert_to_density(profile, self.config.x_grid, m=m)

    def search_width(self):
        cfg = self.config
        return cfg.m_search if cfg.m_search is not None else cfg.cap(self.J)

    def adaptive(self, profile):
        bar = threshold_cf(profile, self.J, self.config)
        m_hat = adaptive_cutoff(bar, self.J, self.config, self.cutoff_rule)
        if m_hat < bar.grid.step:
            return m_hat, zero_density(self.config.x_grid)
        return m_hat, invert_to_density(bar, self.config.x_grid, m=m_hat)

    def with_size(self, size):
        return replace(self, J=int(size))

    def describe(self):
        cfg = self.config
        info = {"jump": self.jump.literal(), "noise": self.noise.literal(), "J": self.J,
                "t1": cfg.t1, "t2": cfg.t2, "kappa": cfg.kappa, "alpha": cfg.alpha}
        if not self.jump.has_second_moment:
            info["note"] = "jump law has no finite second moment; moment-based checks skipped"
        return info


@dataclass(frozen=True)
class MellinSetting:
    """Multiplicative increments, Mellin estimator, ``omega_c`` loss."""

    jump: Law
    n: int
    config: MellinConfig
    cutoff_rule: str = "last"

    def truth(self):
        x = self.config.x_grid.points
        return DensityEstimate(x, analytic_density(self.jump, x))

    def loss(self, est, truth):
        return weighted_l2_distance(est, truth, self.config.c)

    def simulate(self, rng):
        cfg = self.config
        return sample_increments(self.jump, cfg.lam, cfg.delta, self.n, rng).increments

    def transform(self, data, half_width):
        return estimate_jump_mellin(data, self.config, self.config.grid(half_width))

    def invert(self, profile, m):
        return invert_mellin(profile, self.config.x_grid, m=m)

    def search_width(self):
        cfg = self.config
        return cfg.m_search if cfg.m_search is not None else cfg.cap(self.n)

    def adaptive(self, profile):
        bar = threshold_mellin(profile, self.n, self.config)
        m_hat = adaptive_cutoff_mellin(bar, self.n, self.config, self.cutoff_rule)
        if m_hat < bar.grid.step:
            x = self.config.x_grid.points
            return m_hat, DensityEstimate(x, np.zeros_like(x))
        return m_hat, invert_mellin(bar, self.config.x_grid, m=m_hat)

    def with_size(self, size):
        return replace(self, n=int(size))

    def describe(self):
        cfg = self.config
        return {"jump": self.jump.literal(), "n": self.n, "lambda": cfg.lam, "delta": cfg.delta,
                "c": cfg.c, "kappa": cfg.kappa, "alpha": cfg.alpha}


# sweeps


def sweep_cutoff(setting, m_values, replicates, rng=None, threads=1, adaptive=False):
    """MISE for each cutoff in ``m_values``.

    Within a replicate all cutoffs share one simulated data set (common
    random numbers). With ``adaptive`` the data-driven cutoff is evaluated
    on the same data and reported under ``extra["adaptive"]``.
    """
    m_values = [float(m) for m in m_values]
    if not m_values:
        raise EmptySweep("no cutoff values to sweep")
    truth = setting.truth()
    width = max(m_values)
    if adaptive:
        width = max(width, setting.search_width())

    def task(g):
        profile = setting.transform(setting.simulate(g), width)
        row = [setting.loss(setting.invert(profile, m), truth) for m in m_values]
        if adaptive:
            m_hat, est = setting.adaptive(profile)
            row += [setting.loss(est, truth), m_hat]
        return row

    out = np.asarray(run_replicates(task, replicates, rng, threads))
    P = len(m_values)
    mise, se = _mean_stderr(out[:, :P])
    report = RiskReport("m", m_values, mise, se, replicates, setting.describe(), out[:, :P])
    if adaptive:
        a_mean, a_se = _mean_stderr(out[:, P])
        report.extra["adaptive"] = {
            "mise": float(a_mean),
            "stderr": float(a_se),
            "m_hat": out[:, P + 1].copy(),
            "losses": out[:, P].copy(),
        }
    return report


def sweep_t2(setting: FourierSetting, t2_values, replicates, rng=None, threads=1):
    """MISE at fixed ``t1`` and ``m`` for each second time ``t2``.

    Each replicate simulates one panel observed at ``t1`` and every ``t2``,
    so all ``t2`` values see the same channel paths.
    """
    t2_values = [float(t) for t in t2_values]
    if not t2_values:
        raise EmptySweep("no t2 values to sweep")
    cfg = setting.config
    if any(t <= cfg.t1 for t in t2_values):
        raise T2NotAboveT1(f"every t2 must exceed t1 = {cfg.t1}")
    times = sorted(set([cfg.t1] + t2_values))
    truth = setting.truth()
    grid = cfg.grid()

    def task(g):
        panel = setting.simulate(g, times)
        l1 = truncated_log(panel.column(cfg.t1), grid)
        row = []
        for t2 in t2_values:
            l2 = truncated_log(panel.column(t2), grid)
            phi = ComplexProfile(grid, 1.0 + (l2.values - l1.values) / (t2 - cfg.t1), True)
            row.append(setting.loss(invert_to_density(phi, cfg.x_grid), truth))
        return row

    out = np.asarray(run_replicates(task, replicates, rng, threads))
    mise, se = _mean_stderr(out)
    return RiskReport("t2", t2_values, mise, se, replicates, dict(setting.describe(), m=cfg.m), out)


def sweep_sample_size(setting, sizes, replicates, rng=None, threads=1, m=None):
    """MISE at a fixed cutoff as the sample size (J or n) varies."""
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise EmptySweep("no sample sizes to sweep")
    m = setting.config.m if m is None else float(m)
    seed = resolve_seed(rng)
    means, ses, all_losses = [], [], []
    for i, size in enumerate(sizes):
        s = setting.with_size(size)
        truth = s.truth()

        def task(g, s=s, truth=truth):
            return s.loss(s.invert(s.transform(s.simulate(g), m), m), truth)

        losses = np.asarray(run_replicates(task, replicates, substream(seed, 3, i).integers(2**63), threads))
        mean, se = _mean_stderr(losses)
        means.append(float(mean))
        ses.append(float(se))
        all_losses.append(losses)
    name = "J" if isinstance(setting, FourierSetting) else "n"
    return RiskReport(name, sizes, np.array(means), np.array(ses), replicates,
                      dict(setting.describe(), m=m), np.column_stack(all_losses))
