import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import integrate

from decompound.fourier import (
    FourierConfig,
    MismatchedChannelCounts,
    NonHermitianInput,
    adaptive_cutoff,
    estimate_fourier,
    estimate_jump_cf,
    invert_to_density,
    kappa_level,
    threshold_cf,
    threshold_level,
    truncated_log,
    truncated_target_density,
)
from decompound.grids import DensityEstimate, FrequencyGrid, XGrid
from decompound.laws import Cauchy, Degenerate0, Gaussian, PointMass, analytic_density
from decompound.risk import l2_distance
from decompound.simulate import sample_panel
from decompound.spectral import ComplexProfile

CFG = FourierConfig(t1=0.5, t2=1.0)
GAUSS = Gaussian(0, 1)


def panel(jump, noise, J, seed, times=(0.5, 1.0)):
    p = sample_panel(jump, noise, J, times, seed)
    return p.column(times[0]), p.column(times[1])


def test_config_validation():
    with pytest.raises(ValueError, match="t2 must exceed t1"):
        FourierConfig(t1=0.5, t2=0.5)
    with pytest.raises(ValueError):
        FourierConfig(alpha=1.0)
    with pytest.raises(ValueError):
        FourierConfig(kappa_form="other")


def band(jump, noise, u, J, cfg=CFG):
    """Four delta-method standard deviations of phi_tilde at each u.

    ``sd(log phi_hat) ~ sqrt((1 - |phi|^2) / J) / |phi|``; the two times are
    combined as if perfectly correlated, which can only widen the band.
    """
    sd = 0.0
    for t in (cfg.t1, cfg.t2):
        mod = np.abs(np.exp(t * (jump.cf(u) - 1)) * noise.cf(u))
        sd = sd + np.sqrt((1 - mod**2) / J) / mod
    return 4 * sd / cfg.gap


@pytest.mark.parametrize("jump, noise, m, seed", [
    (PointMass(1.0), Degenerate0(), 3.0, 1),
    (GAUSS, GAUSS, 2.0, 2),
])
def test_consistency_within_delta_band(jump, noise, m, seed):
    J = 10**5
    z1, z2 = panel(jump, noise, J, seed)
    grid = FrequencyGrid(m, 0.01)
    phi = estimate_jump_cf(z1, z2, CFG, grid)
    err = np.abs(phi.values - jump.cf(grid.points))
    assert np.all(err <= band(jump, noise, grid.points, J))


def test_consistency_improves_with_J():
    grid = FrequencyGrid(3.0, 0.01)
    errs = []
    for J in (10**3, 10**4, 10**5):
        z1, z2 = panel(PointMass(1.0), Degenerate0(), J, 11)
        phi = estimate_jump_cf(z1, z2, CFG, grid)
        errs.append(np.max(np.abs(phi.values - np.exp(1j * grid.points))))
    assert errs[0] > errs[1] > errs[2]


def test_both_truncations_give_one():
    z1, z2 = panel(Cauchy(0, 5), GAUSS, 50, 3)
    grid = FrequencyGrid(40.0, 0.01)
    l1, l2 = truncated_log(z1, grid), truncated_log(z2, grid)
    phi = estimate_jump_cf(z1, z2, CFG, grid)
    both = (l1.values == 0) & (l2.values == 0)
    assert both.sum() > 1
    assert np.all(phi.values[both] == 1)


@given(x=arrays(float, st.integers(2, 80), elements=st.floats(-30, 30)), m=st.floats(1, 30))
def test_truncated_log_bounded(x, m):
    log = truncated_log(x, FrequencyGrid(m, 0.05))
    assert np.all(np.abs(log.values) <= math.log(x.size))
    assert log.is_hermitian()


def test_hermitian_preserved():
    z1, z2 = panel(GAUSS, GAUSS, 2000, 4)
    phi = estimate_jump_cf(z1, z2, CFG, FrequencyGrid(10.0, 0.01))
    assert phi.is_hermitian()
    assert threshold_cf(phi, 2000, CFG).is_hermitian()


def test_mismatched_channels():
    with pytest.raises(MismatchedChannelCounts):
        estimate_jump_cf(np.zeros(5), np.zeros(6), CFG)


def test_invert_zero_profile():
    g = FrequencyGrid(2.0, 0.01)
    est = invert_to_density(ComplexProfile(g, np.zeros(g.size), True), XGrid(-5, 5, 0.1))
    assert np.all(est.values == 0)


def test_invert_gaussian_cf():
    g = FrequencyGrid(8.0, 0.005)
    est = invert_to_density(ComplexProfile(g, GAUSS.cf(g.points), True), XGrid(-4, 4, 0.01))
    assert np.max(np.abs(est.values - analytic_density(GAUSS, est.x))) < 5e-4


def tail(m):
    return integrate.quad(lambda u: math.exp(-u * u), m, np.inf)[0] / math.pi


def density_of(law, xg):
    return DensityEstimate(xg.points, analytic_density(law, xg.points))


@pytest.mark.parametrize("m, xg, tol", [
    # f_m decays like sin(m x) / x, so the x range must be wide for the mass outside it to vanish
    (3.0, XGrid(-60, 60, 0.01), 1e-6),
    (1.0, XGrid(-400, 400, 0.05), 2e-4),
])
def test_parseval(m, xg, tol):
    fm = truncated_target_density(GAUSS, m, xg)
    assert l2_distance(fm, density_of(GAUSS, xg)) == pytest.approx(tail(m), abs=tol)


def test_truncated_target_large_m():
    xg = XGrid(-6, 6, 0.01)
    fm = truncated_target_density(GAUSS, 50.0, xg)
    assert np.max(np.abs(fm.values - analytic_density(GAUSS, xg.points))) < 1e-8


def test_truncated_cauchy_at_zero():
    fm = truncated_target_density(Cauchy(0, 1), 3.0, XGrid(-1, 1, 0.5))
    assert fm.values[2] == pytest.approx((1 - math.exp(-3)) / math.pi, abs=1e-6)


def test_non_hermitian_rejected():
    g = FrequencyGrid(1.0, 0.1)
    with pytest.raises(NonHermitianInput):
        invert_to_density(ComplexProfile(g, 1j * np.ones(g.size)), XGrid(0, 1, 0.1))


def test_threshold_level_arithmetic():
    J = 10**5
    level = (2 * math.e**2 + math.sqrt(math.log(J * 0.25))) / (math.sqrt(J) * 0.5)
    assert threshold_level(J, CFG) == pytest.approx(level, rel=1e-14)
    proof = FourierConfig(kappa_form="proof")
    assert kappa_level(J, proof) == pytest.approx(2 * math.sqrt(2) * math.e**2 + math.sqrt(math.log(J * 0.25)))
    g = FrequencyGrid(1.0, 0.5)
    w = np.sqrt(1 + g.points**2)
    vals = w * level * np.array([1.001, 0.999, 1.0, 0.999, 1.001])
    out = threshold_cf(ComplexProfile(g, vals, True), J, CFG).values
    assert np.array_equal(out != 0, [True, False, True, False, True])


def test_threshold_zero_and_huge_J():
    g = FrequencyGrid(5.0, 0.01)
    zero = ComplexProfile(g, np.zeros(g.size), True)
    assert np.all(threshold_cf(zero, 1000, CFG).values == 0)
    phi = ComplexProfile(g, GAUSS.cf(g.points), True)
    kept = threshold_cf(phi, 10**8, CFG).values
    big = np.abs(phi.values) >= 0.05
    assert np.array_equal(kept[big], phi.values[big])


def test_adaptive_cutoff_edges():
    g = FrequencyGrid(400.0, 0.1)
    assert adaptive_cutoff(ComplexProfile(g, np.zeros(g.size), True), 10**4, CFG) == 0
    ones = ComplexProfile(g, np.ones(g.size), True)
    assert adaptive_cutoff(ones, 10**4, CFG) == pytest.approx(CFG.cap(10**4))


def test_adaptive_cutoff_rules():
    g = FrequencyGrid(10.0, 1.0)
    v = np.zeros(g.size)
    v[g.K:g.K + 3] = 1
    v[g.K + 7] = 1
    prof = ComplexProfile(g, v + v[::-1] - (np.arange(g.size) == g.K), True)
    assert adaptive_cutoff(prof, 10**6, CFG) == 7.0
    assert adaptive_cutoff(prof, 10**6, CFG, rule="first") == 2.0


def test_adaptive_zero_estimator_when_nothing_survives():
    z1, z2 = panel(GAUSS, GAUSS, 50, 5)
    cfg = FourierConfig(kappa=1e6, x_grid=XGrid(-3, 3, 0.1))
    res = estimate_fourier(z1, z2, cfg, adaptive=True)
    assert res.m_hat == 0 and np.all(res.density.values == 0)


def test_estimate_shapes():
    z1, z2 = panel(GAUSS, GAUSS, 3000, 6)
    res = estimate_fourier(z1, z2, FourierConfig(x_grid=XGrid(-5, 5, 0.05)))
    assert res.density.values.shape == (201,)
    assert res.density.meta["J"] == 3000


def test_scale_structure():
    J = 10**4
    p = sample_panel(PointMass(1.0), Degenerate0(), J, (0.5, 1.0), 7)
    s = 2.0
    a = estimate_jump_cf(s * p.column(0.5), s * p.column(1.0), CFG, FrequencyGrid(3.0, 0.005))
    b = estimate_jump_cf(p.column(0.5), p.column(1.0), CFG, FrequencyGrid(6.0, 0.01))
    assert np.max(np.abs(np.abs(a.values) - np.abs(b.values))) < 0.05
    assert abs(np.argmax(np.abs(a.positive[1:])) - np.argmax(np.abs(b.positive[1:]))) <= 1
