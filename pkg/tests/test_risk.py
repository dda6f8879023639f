import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import integrate

from decompound.fourier import FourierConfig
from decompound.grids import DensityEstimate, GridMismatch, XGrid
from decompound.laws import Beta, Cauchy, Gaussian, GaussianMixture
from decompound.mellin import MellinConfig, NonPositiveX
from decompound.risk import (
    EmptySweep,
    FourierSetting,
    MellinSetting,
    T2NotAboveT1,
    l2_distance,
    mise_monte_carlo,
    sweep_cutoff,
    sweep_sample_size,
    sweep_t2,
    weighted_l2_distance,
)

MIX2 = GaussianMixture((0.3, 0.7), (-2.0, 2.0), (1.0, 1.0))
GAUSS = Gaussian(0, 1)


def dens(x, v):
    return DensityEstimate(x, v)


def gauss_on(xg):
    x = xg.points
    return dens(x, GAUSS.pdf(x))


def small_setting(J=2000, **kw):
    cfg = FourierConfig(x_grid=XGrid(-8, 8, 0.02), **kw)
    return FourierSetting(MIX2, GAUSS, J, cfg)


def test_l2_examples():
    xg = XGrid(-8, 8, 0.01)
    f = gauss_on(xg)
    assert l2_distance(f, f) == 0
    zero = dens(f.x, np.zeros_like(f.x))
    assert l2_distance(zero, f) == pytest.approx(1 / (2 * math.sqrt(math.pi)), abs=1e-8)


def test_l2_constant_shift():
    xg = XGrid(-8, 8, 0.01)
    f = gauss_on(xg)
    c = 0.3
    shifted = dens(f.x, f.values + c)
    direct = integrate.trapezoid(np.full(f.x.size, c * c), f.x)
    assert l2_distance(shifted, f) == pytest.approx(direct, rel=1e-12)
    assert direct == pytest.approx(c * c * 16)


def test_l2_grid_mismatch():
    with pytest.raises(GridMismatch):
        l2_distance(gauss_on(XGrid(-1, 1, 0.1)), gauss_on(XGrid(-1, 1.1, 0.1)))


@given(v=arrays(float, (3, 40), elements=st.floats(-5, 5)))
def test_l2_triangle_inequality(v):
    x = np.linspace(0, 1, 40)
    a, b, c = (dens(x, row) for row in v)
    d = lambda p, q: math.sqrt(l2_distance(p, q))
    assert d(a, c) <= d(a, b) + d(b, c) + 1e-9


def test_weighted_examples():
    xg = XGrid(0.01, 2, 0.01)
    x = xg.points
    a, b = dens(x, np.sin(3 * x)), dens(x, x**2)
    assert weighted_l2_distance(a, b, c=0.5) == pytest.approx(l2_distance(a, b), rel=1e-14)
    assert weighted_l2_distance(a, a) == 0
    with pytest.raises(NonPositiveX):
        weighted_l2_distance(gauss_on(XGrid(-1, 1, 0.1)), gauss_on(XGrid(-1, 1, 0.1)))


def test_weighted_beta_refinement():
    law = Beta(200, 30)
    vals = []
    for step in (0.001, 0.0005):
        xg = XGrid(step, 1.0, step)
        x = xg.points
        vals.append(weighted_l2_distance(dens(x, law.pdf(x)), dens(x, np.zeros_like(x)), c=1.0))
    assert vals[0] == pytest.approx(vals[1], abs=1e-6)


def test_mise_trivial_pipelines():
    xg = XGrid(-8, 8, 0.01)
    f = gauss_on(xg)
    assert mise_monte_carlo(lambda g: f, f, 5, 1) == (0.0, 0.0)
    mean, se = mise_monte_carlo(lambda g: dens(f.x, np.zeros_like(f.x)), f, 5, 1)
    assert mean == pytest.approx(1 / (2 * math.sqrt(math.pi)), abs=1e-8) and se == 0
    with pytest.raises(ValueError):
        mise_monte_carlo(lambda g: f, f, 1, 1)


def test_mise_seed_and_thread_determinism():
    s = small_setting()
    truth = s.truth()

    def pipeline(g):
        return s.invert(s.transform(s.simulate(g), 2.0), 2.0)

    serial = mise_monte_carlo(pipeline, truth, 6, 11, threads=1)
    parallel = mise_monte_carlo(pipeline, truth, 6, 11, threads=3)
    assert serial == parallel
    assert mise_monte_carlo(pipeline, truth, 6, 12) != serial


def test_sweep_cutoff_shape_and_errors():
    s = small_setting()
    rep = sweep_cutoff(s, [2.0], 3, 1)
    assert len(rep.mise) == 1 and rep.values == [2.0]
    with pytest.raises(EmptySweep):
        sweep_cutoff(s, [], 3, 1)


def test_sweep_cutoff_u_shape():
    rep = sweep_cutoff(small_setting(J=10**4), [0.25, 1.5, 6.0], 10, 3)
    assert rep.mise[1] < rep.mise[0] and rep.mise[1] < rep.mise[2]
    assert np.all(rep.mise >= 0) and np.all(rep.stderr >= 0)


def test_sweep_cutoff_adaptive_extra():
    rep = sweep_cutoff(small_setting(m_search=20.0), [1.0, 2.0], 3, 2, adaptive=True)
    a = rep.extra["adaptive"]
    assert a["m_hat"].shape == (3,) and a["mise"] >= 0


def test_sweep_cutoff_thread_determinism():
    s = small_setting()
    a = sweep_cutoff(s, [1.0, 2.0], 4, 5, threads=1)
    b = sweep_cutoff(s, [1.0, 2.0], 4, 5, threads=4)
    assert np.array_equal(a.mise, b.mise) and np.array_equal(a.stderr, b.stderr)


def test_stderr_scaling():
    # a single 25-vs-100 ratio is too noisy for skewed squared-error losses,
    # so the geometric mean over 8 independent pairs is compared with 2
    s = FourierSetting(MIX2, GAUSS, 2000, FourierConfig(freq_step=0.01, x_grid=XGrid(-8, 8, 0.05)))
    ratios = []
    for k in range(8):
        se25 = sweep_cutoff(s, [1.0], 25, 1000 + k).stderr[0]
        se100 = sweep_cutoff(s, [1.0], 100, 2000 + k).stderr[0]
        ratios.append(se25 / se100)
    assert 1.5 <= math.exp(np.mean(np.log(ratios))) <= 2.7


def test_sweep_t2_errors_and_singleton():
    s = small_setting(t1=0.2)
    assert len(sweep_t2(s, [1.0], 2, 1).mise) == 1
    with pytest.raises(T2NotAboveT1):
        sweep_t2(s, [0.1, 1.0], 2, 1)
    with pytest.raises(EmptySweep):
        sweep_t2(s, [], 2, 1)


def test_sample_size_sweep_mellin_decreases():
    cfg = MellinConfig(m=80.0, freq_step=0.05)
    rep = sweep_sample_size(MellinSetting(Beta(200, 30), 500, cfg), [500, 2000, 8000], 20, 4)
    assert rep.mise[0] > rep.mise[1] > rep.mise[2]


def test_cauchy_setting_flagged():
    info = FourierSetting(Cauchy(0, 1), GAUSS, 100, FourierConfig()).describe()
    assert "second moment" in info["note"]
