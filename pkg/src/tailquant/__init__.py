"""Confidence intervals and tests for extreme quantiles of a latent
cross-sectional distribution observed through noisy per-unit estimates.

Extreme-order, intermediate-order and central-order procedures share the
:class:`~tailquant.sample.EstimateSample` container; a Monte Carlo harness
and a batch CLI sit on top.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .central import (
    CentralConfig,
    binomial_ci,
    corrected_quantile,
    corrected_quantile_bootstrap_ci,
    estimate_sigma2_from_panel,
    tau_star,
)
from .ev_index import EVIndexEstimate, averaged_gamma, default_tail_count, hill_estimator, pwm_estimator
from .exceptions import DegenerateTailError, InfeasibleError, ValidationError
from .extreme import (
    RatioConfig,
    SubsampleConfig,
    SupportTestResult,
    evt_ratio_statistic,
    extreme_ci,
    median_unbiased_estimator,
    subsample_critical_values,
    support_test,
)
from .intermediate import (
    IntermediateConfig,
    intermediate_ci_normal,
    intermediate_ci_subsampled,
    spacing_statistic,
)
from .limit_dist import (
    CriticalValueTable,
    LimitLawSpec,
    load_table,
    sample_limit_ratio,
    save_table,
    table_quantile,
)
from .sample import (
    AffineTransform,
    ConfidenceInterval,
    EstimateSample,
    TailTarget,
    empirical_quantile,
    make_sample,
    standardize,
    top_order_statistic,
)
from .simulation import (
    DGPConfig,
    ExperimentReport,
    HarnessKnobs,
    PanelData,
    RateDiagnostic,
    frechet_like_quantile,
    generate_panel,
    noise_variance,
    rate_diagnostic,
    run_coverage_experiment,
    sample_coefficients,
    sample_noise,
    theta_variance,
    unitwise_ols,
)

__all__ = [
    "AffineTransform",
    "CentralConfig",
    "ConfidenceInterval",
    "CriticalValueTable",
    "DGPConfig",
    "DegenerateTailError",
    "EVIndexEstimate",
    "EstimateSample",
    "ExperimentReport",
    "HarnessKnobs",
    "InfeasibleError",
    "IntermediateConfig",
    "KERNEL_BACKEND",
    "LimitLawSpec",
    "PanelData",
    "RateDiagnostic",
    "RatioConfig",
    "SubsampleConfig",
    "SupportTestResult",
    "TailTarget",
    "ValidationError",
    "averaged_gamma",
    "binomial_ci",
    "corrected_quantile",
    "corrected_quantile_bootstrap_ci",
    "default_tail_count",
    "empirical_quantile",
    "estimate_sigma2_from_panel",
    "evt_ratio_statistic",
    "extreme_ci",
    "frechet_like_quantile",
    "generate_panel",
    "hill_estimator",
    "intermediate_ci_normal",
    "intermediate_ci_subsampled",
    "load_table",
    "make_sample",
    "median_unbiased_estimator",
    "noise_variance",
    "pwm_estimator",
    "rate_diagnostic",
    "run_coverage_experiment",
    "sample_coefficients",
    "sample_limit_ratio",
    "sample_noise",
    "save_table",
    "spacing_statistic",
    "standardize",
    "subsample_critical_values",
    "support_test",
    "table_quantile",
    "tau_star",
    "theta_variance",
    "top_order_statistic",
    "unitwise_ols",
]
