"""Probabilistic verification of ReLU networks with characteristic functions."""

from .cf import (
    AnalyticCF,
    FrequencyGrid,
    LinearCombinationCF,
    MarginalSet,
    SampledCF,
    evaluate_cf,
    make_analytic_cf,
    moment_from_cf,
    sample_on_grid,
)
from .hilbert import HilbertParams, gil_pelaez, gil_pelaez_cdf, hilbert_sinc, j_a
from .propagation import (
    AffineLayer,
    Network,
    affine_marginals,
    propagate_network,
    relu_marginal,
)
from .verification import (
    HalfSpace,
    VerificationProblem,
    output_scalar_cf,
    quantile,
    scenario_quantile,
    scenario_sample_count,
    verify_halfspace,
    verify_polytope,
)
from .oracle import compare, empirical_cdf, forward, sample_inputs
from .model_io import load_config, load_network, load_problem, random_network, save_network

__version__ = "0.1.0"
