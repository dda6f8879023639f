"""Nonparametric decompounding of compound Poisson jump densities.

Two estimators are provided: a two-time Fourier estimator for noisy
additive panels and a Mellin estimator for multiplicative increments,
each with an adaptive spectral cutoff, plus a Monte-Carlo risk harness.
"""

__version__ = "0.1.0"

from .grids import DensityEstimate, FrequencyGrid, XGrid
from .laws import (
    Beta,
    Cauchy,
    Degenerate0,
    Gamma,
    Gaussian,
    GaussianMixture,
    PointMass,
    analytic_cf,
    analytic_density,
    analytic_mellin,
    parse_law,
    sample,
)
from .simulate import IncrementSample, Panel, sample_increments, sample_panel
from .spectral import (
    ComplexProfile,
    distinguished_log,
    empirical_cf,
    empirical_cf_derivative,
)
from .fourier import (
    FourierConfig,
    adaptive_cutoff,
    estimate_fourier,
    estimate_jump_cf,
    invert_to_density,
    threshold_cf,
    truncated_target_density,
)
from .mellin import (
    MellinConfig,
    adaptive_cutoff_mellin,
    empirical_mellin,
    empirical_mellin_derivative,
    estimate_jump_mellin,
    estimate_mellin,
    invert_mellin,
    mellin_distinguished_log,
    weighted_target,
)
from .risk import (
    RiskReport,
    l2_distance,
    mise_monte_carlo,
    sweep_cutoff,
    sweep_sample_size,
    sweep_t2,
    weighted_l2_distance,
)
from .rates import theoretical_rate
