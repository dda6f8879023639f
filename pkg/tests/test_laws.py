import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats

from decompound.laws import (
    Beta,
    Cauchy,
    Degenerate0,
    Gamma,
    Gaussian,
    GaussianMixture,
    LawSyntaxError,
    OutsideStrip,
    PointMass,
    Unsupported,
    analytic_cf,
    analytic_density,
    analytic_mellin,
    parse_law,
    sample,
)

MIX = GaussianMixture((0.3, 0.7), (-3.5, 3.5), (1.0, 1.0))
CF_LAWS = [Gaussian(0.3, 1.7), MIX, Gamma(2, 1), Cauchy(0.5, 2), PointMass(1.5), Degenerate0()]


def test_sample_degenerate():
    g = np.random.default_rng(0)
    assert sample(PointMass(2.0), 3, g).tolist() == [2.0, 2.0, 2.0]
    assert sample(Degenerate0(), 5, g).tolist() == [0.0] * 5


def test_gaussian_sample_mean():
    x = sample(Gaussian(0, 1), 10**6, np.random.default_rng(1))
    assert abs(x.mean()) < 4 / math.sqrt(1e6)


def test_sample_reproducible():
    a = sample(MIX, 100, np.random.default_rng(7))
    b = sample(MIX, 100, np.random.default_rng(7))
    assert np.array_equal(a, b)


@pytest.mark.parametrize("u", [-2.3, 0.0, 0.7, 11.0])
def test_point_mass_cf(u):
    assert analytic_cf(PointMass(1.3), u) == pytest.approx(complex(math.cos(1.3 * u), math.sin(1.3 * u)), abs=1e-15)


def test_cf_at_zero():
    assert analytic_cf(Gaussian(0, 1), 0.0) == 1


@pytest.mark.parametrize("u", [0.3, 1.0, 4.0])
def test_cauchy_cf_matches_quadrature(u):
    assert analytic_cf(Cauchy(0, 1), u) == pytest.approx(math.exp(-u))
    re, _ = integrate.quad(lambda x: stats.cauchy.pdf(x), 0, np.inf, weight="cos", wvar=u)
    assert 2 * re == pytest.approx(math.exp(-u), abs=1e-7)


def test_gamma_cf_matches_quadrature():
    u = 0.8
    re, _ = integrate.quad(lambda x: x * math.exp(-x), 0, np.inf, weight="cos", wvar=u)
    im, _ = integrate.quad(lambda x: x * math.exp(-x), 0, np.inf, weight="sin", wvar=u)
    assert analytic_cf(Gamma(2, 1), u) == pytest.approx(complex(re, im), abs=1e-8)


def test_beta_cf_unsupported():
    with pytest.raises(Unsupported):
        analytic_cf(Beta(200, 30), 1.0)


@pytest.mark.parametrize("law", CF_LAWS, ids=lambda l: l.literal())
@given(u=st.floats(-200, 200))
def test_cf_bounded_and_hermitian(law, u):
    v = analytic_cf(law, u)
    assert abs(v) <= 1 + 1e-12
    assert analytic_cf(law, -u) == v.conjugate()


def test_mellin_examples():
    assert analytic_mellin(PointMass(3.0), 1, 0) == 1
    assert analytic_mellin(PointMass(2.0), 1, 1.7) == pytest.approx(complex(math.cos(1.7 * math.log(2)), math.sin(1.7 * math.log(2))))
    assert analytic_mellin(Beta(200, 30), 1, 0) == pytest.approx(1, abs=1e-12)


def test_beta_mellin_matches_quadrature():
    law = Beta(20, 5)
    t = 3.0
    re, _ = integrate.quad(lambda x: math.cos(t * math.log(x)) * law.pdf(x), 0, 1, limit=200)
    im, _ = integrate.quad(lambda x: math.sin(t * math.log(x)) * law.pdf(x), 0, 1, limit=200)
    assert analytic_mellin(law, 1, t) == pytest.approx(complex(re, im), abs=1e-8)


def test_mellin_outside_strip():
    with pytest.raises(OutsideStrip):
        analytic_mellin(Beta(2, 3), -1.5, 0.0)


def test_mellin_unsupported_for_real_line_laws():
    with pytest.raises(Unsupported):
        analytic_mellin(Gaussian(0, 1), 1, 0.0)


@given(x0=st.floats(0.05, 20), c=st.floats(-2, 3), t=st.floats(-100, 100))
def test_point_mass_mellin_modulus(x0, c, t):
    assert abs(analytic_mellin(PointMass(x0), c, t)) == pytest.approx(x0 ** (c - 1), rel=1e-12)


def test_density_examples():
    assert analytic_density(Gaussian(0, 1), 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi))
    phi35 = math.exp(-3.5**2 / 2) / math.sqrt(2 * math.pi)
    assert analytic_density(MIX, 0.0) == pytest.approx(0.3 * phi35 + 0.7 * phi35)
    assert analytic_density(Gamma(2, 1), 1.0) == pytest.approx(math.exp(-1))


@pytest.mark.parametrize("law", [PointMass(1.0), Degenerate0()])
def test_density_unsupported_for_atoms(law):
    with pytest.raises(Unsupported):
        analytic_density(law, 0.0)


@pytest.mark.parametrize("law, lo, hi", [(MIX, -12, 12), (Gamma(2, 1), 0, 60), (Beta(200, 30), 0, 1)])
def test_density_integrates_to_one(law, lo, hi):
    x = np.linspace(lo, hi, 200001)
    assert integrate.trapezoid(analytic_density(law, x), x) == pytest.approx(1, abs=1e-6)


@pytest.mark.parametrize("bad", [
    lambda: GaussianMixture((0.3, 0.6), (0, 1), (1, 1)),
    lambda: Gaussian(0, 0),
    lambda: Gamma(-1, 1),
    lambda: Cauchy(0, -1),
    lambda: Beta(0, 1),
])
def test_invalid_parameters(bad):
    with pytest.raises(ValueError):
        bad()


@pytest.mark.parametrize("text, law", [
    ("mixture(0.3:N(-3.5,1), 0.7:N(3.5,1))", MIX),
    ("gamma(2,1)", Gamma(2, 1)),
    ("cauchy(0,1)", Cauchy(0, 1)),
    ("beta(200,30)", Beta(200, 30)),
    ("N(0,1)", Gaussian(0, 1)),
    ("none", Degenerate0()),
    ("point(2)", PointMass(2)),
])
def test_parse_law(text, law):
    assert parse_law(text) == law
    assert parse_law(law.literal()) == law


@pytest.mark.parametrize("text", ["gamma(", "foo(1)", "N(1)", "mixture(N(0,1))", "beta(a,b)", "mixture(1:gamma(2,1))"])
def test_parse_law_rejects(text):
    with pytest.raises(LawSyntaxError):
        parse_law(text)
