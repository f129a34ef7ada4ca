import math

import numpy as np
import pytest

from tailquant import (
    CentralConfig,
    InfeasibleError,
    PanelData,
    ValidationError,
    binomial_ci,
    empirical_quantile,
    estimate_sigma2_from_panel,
    corrected_quantile_bootstrap_ci,
    corrected_quantile,
    tau_star,
    make_sample,
)


def test_central_config_validation():
    with pytest.raises(ValidationError):
        CentralConfig(tau=1.2)
    with pytest.raises(ValidationError):
        CentralConfig(tau=0.5, bandwidth=0.0)
    with pytest.raises(ValidationError):
        CentralConfig(tau=0.5, kernel="epanechnikov")
    with pytest.raises(ValidationError):
        CentralConfig(tau=0.5, sigma2=np.array([1.0, -0.5]))


def test_binomial_ci_hand_ranks_n5():
    # Binomial(5, 0.5): P(X<=0)=1/32, P(X<=4)=31/32 -> ranks [1, 5]
    s = make_sample([10.0, 20.0, 30.0, 40.0, 50.0])
    ci = binomial_ci(s, 0.5, 0.05)
    assert ci.lower == 10.0 and ci.upper == 50.0


def test_binomial_ci_infeasible_upper():
    s = make_sample(np.arange(200.0))
    with pytest.raises(InfeasibleError):
        binomial_ci(s, 0.999, 0.05)


def test_binomial_ci_widening_alpha_shrinks_ranks():
    s = make_sample(np.arange(1000.0))
    narrow = binomial_ci(s, 0.7, 0.01)
    wide = binomial_ci(s, 0.7, 0.20)
    assert narrow.lower <= wide.lower <= wide.upper <= narrow.upper


def test_binomial_ci_interior_case_uses_exact_half_alpha_ranks():
    from scipy.stats import binom

    n, tau, alpha = 400, 0.6, 0.05
    s = make_sample(np.arange(float(n)))
    ci = binomial_ci(s, tau, alpha)
    lower_rank = int(ci.lower) + 1
    upper_rank = int(ci.upper) + 1
    assert binom.cdf(lower_rank - 1, n, tau) <= alpha / 2 < binom.cdf(lower_rank, n, tau)
    assert binom.cdf(upper_rank - 1, n, tau) >= 1 - alpha / 2 > binom.cdf(upper_rank - 2, n, tau)


@pytest.mark.slow
def test_binomial_ci_coverage_guarantee():
    # iid continuous data, n=200, tau=0.5: empirical coverage >= 0.945
    rng = np.random.default_rng(5)
    covered = 0
    reps = 5000
    for _ in range(reps):
        s = make_sample(rng.random(200))
        ci = binomial_ci(s, 0.5, 0.05)
        covered += ci.contains(0.5)
    assert covered / reps >= 0.945


def _panel_from_arrays(y, z, x=None):
    return PanelData(y=np.asarray(y, float), z=np.asarray(z, float), x=x)


def test_tau_star_zero_variances():
    s = make_sample(np.linspace(0, 1, 30), t=10)
    res = tau_star(s, CentralConfig(tau=0.6, sigma2=np.zeros(30)))
    assert res.tau_star == 0.6 and res.bias_estimate == 0.0


def test_tau_star_odd_kernel_cancellation():
    # symmetric sample about the evaluation point with constant variances
    s = make_sample([-2.0, -1.0, 0.0, 1.0, 2.0], t=10)
    res = tau_star(s, CentralConfig(tau=0.6, sigma2=np.ones(5), bandwidth=1.0))
    assert res.tau_star == 0.6


def test_tau_star_hand_case():
    values = [0.0, 0.5, 1.1, 2.0, 3.5]
    t, tau, h = 10, 0.6, 1.0
    sigma2 = np.ones(5)
    s = make_sample(values, t=t)
    res = tau_star(s, CentralConfig(tau=tau, sigma2=sigma2, bandwidth=h))
    # direct evaluation of the displayed sum at theta = sample 0.6-quantile
    theta = sorted(values)[int(math.floor(5 * tau)) - 1]
    ksum = 0.0
    for v in values:
        u = (v - theta) / h
        ksum += -u * math.exp(-0.5 * u * u) / math.sqrt(2 * math.pi)
    bias = -(ksum / (5 * h * h)) / 2.0
    expected = tau + bias / t
    assert abs(res.tau_star - expected) < 1e-12
    assert res.bias_estimate != 0.0


def test_tau_star_clamps_to_interior():
    s = make_sample(np.linspace(0, 1, 10), t=1)
    huge = CentralConfig(tau=0.95, sigma2=np.full(10, 1e6), bandwidth=0.05)
    res = tau_star(s, huge)
    assert 1 / 10 <= res.tau_star <= 1 - 1 / 10
    assert res.clamped


def test_tau_star_requires_metadata():
    s_no_t = make_sample(np.linspace(0, 1, 10))
    with pytest.raises(ValidationError):
        tau_star(s_no_t, CentralConfig(tau=0.5, sigma2=np.ones(10)))
    s = make_sample(np.linspace(0, 1, 10), t=5)
    with pytest.raises(ValidationError):
        tau_star(s, CentralConfig(tau=0.5))
    with pytest.raises(ValidationError):
        tau_star(s, CentralConfig(tau=0.5, sigma2=np.ones(7)))


def test_corrected_quantile_no_correction():
    rng = np.random.default_rng(0)
    s = make_sample(rng.normal(size=50), t=10)
    ccfg = CentralConfig(tau=0.7, sigma2=np.zeros(50))
    assert corrected_quantile(s, ccfg) == empirical_quantile(s, 0.7)


def test_corrected_quantile_rank_shift():
    rng = np.random.default_rng(1)
    s = make_sample(rng.normal(size=200), t=10)
    ccfg = CentralConfig(tau=0.6, sigma2=np.full(200, 2.0), bandwidth=0.5)
    res = tau_star(s, ccfg)
    rank = min(max(int(np.floor(200 * res.tau_star)), 1), 200)
    assert corrected_quantile(s, ccfg) == s.values[rank - 1]


def test_bootstrap_constant_sample_zero_width():
    s = make_sample(np.full(20, 4.2), t=10)
    ci = corrected_quantile_bootstrap_ci(s, CentralConfig(tau=0.5, sigma2=np.ones(20)), 0.05, seed=1)
    assert ci.lower == ci.upper == 4.2


def test_bootstrap_deterministic_in_seed():
    rng = np.random.default_rng(2)
    s = make_sample(rng.normal(size=80), t=10)
    ccfg = CentralConfig(tau=0.5, sigma2=np.ones(80), n_bootstrap=300)
    a = corrected_quantile_bootstrap_ci(s, ccfg, 0.05, seed=9)
    b = corrected_quantile_bootstrap_ci(s, ccfg, 0.05, seed=9)
    assert (a.lower, a.upper) == (b.lower, b.upper)


@pytest.mark.slow
def test_bootstrap_interval_contains_point_estimate_mostly():
    # percentile interval should contain the full-sample corrected quantile
    # in at least 95% of simulated datasets
    rng = np.random.default_rng(3)
    hits = 0
    reps = 200
    for i in range(reps):
        values = rng.normal(size=500)
        sigma2 = rng.random(500) * 0.5
        order = np.argsort(values, kind="stable")
        s = make_sample(values[order], t=10)
        ccfg = CentralConfig(tau=0.5, sigma2=sigma2[order], n_bootstrap=400)
        point = corrected_quantile(s, ccfg)
        ci = corrected_quantile_bootstrap_ci(s, ccfg, 0.05, seed=i)
        hits += ci.contains(point)
    assert hits / reps >= 0.95


def test_sigma2_zero_residuals():
    # exact linear outcomes leave no residual variance
    rng = np.random.default_rng(4)
    z = rng.normal(size=(6, 5))
    y = 2.0 + 3.0 * z
    sigma2 = estimate_sigma2_from_panel(_panel_from_arrays(y, z))
    assert np.allclose(sigma2, 0.0, atol=1e-18)


def test_sigma2_quadratic_in_noise_scale():
    rng = np.random.default_rng(5)
    z = rng.normal(size=(8, 6))
    u = rng.normal(size=(8, 6))
    base = estimate_sigma2_from_panel(_panel_from_arrays(1.0 + 2.0 * z + u, z))
    doubled = estimate_sigma2_from_panel(_panel_from_arrays(1.0 + 2.0 * z + 2.0 * u, z))
    assert np.allclose(doubled, 4.0 * base, rtol=1e-9)


def test_sigma2_hand_computation():
    # one unit, three periods, regressors [1, z]
    z = np.array([[0.0, 1.0, 2.0]])
    y = np.array([[1.0, 2.0, 4.0]])
    sigma2 = estimate_sigma2_from_panel(_panel_from_arrays(y, z))
    # normal equations by hand: X'X = [[3, 3], [3, 5]], X'y = [7, 10]
    xtx = np.array([[3.0, 3.0], [3.0, 5.0]])
    xty = np.array([7.0, 10.0])
    coef = np.linalg.solve(xtx, xty)
    resid = y[0] - (coef[0] + coef[1] * z[0])
    s2 = resid @ resid / (3 - 2)
    expected = 3 * s2 * np.linalg.inv(xtx)[1, 1]
    assert abs(sigma2[0] - expected) < 1e-12


def test_sigma2_rank_deficient_errors():
    z = np.array([[1.0, 1.0, 1.0, 1.0]])  # collinear with the intercept
    y = np.array([[1.0, 2.0, 3.0, 4.0]])
    with pytest.raises(ValidationError):
        estimate_sigma2_from_panel(_panel_from_arrays(y, z))
