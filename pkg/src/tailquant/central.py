"""Central-order intervals: order-statistic (binomial) intervals and the
bias-corrected quantile with a bootstrap interval.

The correction shifts the quantile rank by an estimate of the leading
noise-induced bias of the sample quantile, which requires the per-unit
noise variances and the first-stage series length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binom

from ._ols import batched_unit_ols, design_from_panel
from .exceptions import InfeasibleError, ValidationError
from .sample import ConfidenceInterval, EstimateSample, TailTarget, empirical_quantile
from . import _kernels

_BOOT_CHUNK_ELEMS = 10_000_000


@dataclass(frozen=True)
class CentralConfig:
    """Settings for the corrected central quantile."""

    tau: float
    bandwidth: float | None = None  # None: normal-reference rule
    kernel: str = "gaussian"
    sigma2: np.ndarray | None = None  # aligned with the sorted sample values
    n_bootstrap: int = 1000

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ValidationError("tau must lie in (0, 1)")
        if self.bandwidth is not None and self.bandwidth <= 0:
            raise ValidationError("bandwidth must be positive")
        if self.kernel != "gaussian":
            raise ValidationError(f"unsupported kernel {self.kernel!r}; only 'gaussian' has the analytic derivative")
        if self.n_bootstrap < 1:
            raise ValidationError("n_bootstrap must be positive")
        if self.sigma2 is not None:
            arr = np.asarray(self.sigma2, dtype=np.float64)
            if np.any(~np.isfinite(arr)) or np.any(arr < 0):
                raise ValidationError("sigma2 entries must be finite and non-negative")
            object.__setattr__(self, "sigma2", arr)


def binomial_ci(sample: EstimateSample, tau: float, alpha: float) -> ConfidenceInterval:
    """Order-statistic interval with ranks from the Binomial(n, tau) law.

    Each side aims at alpha/2 miss probability.  When no rank achieves
    that, the side falls back to the extreme order statistic provided its
    residual miss probability stays below alpha; otherwise the interval is
    infeasible (the high-quantile failure mode of raw central intervals).
    """
    if not 0.0 < tau < 1.0:
        raise ValidationError("tau must lie in (0, 1)")
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    n = sample.n
    cdf = binom.cdf(np.arange(n + 1), n, tau)
    half = alpha / 2.0
    notes = []

    # largest rank whose lower miss P(X <= L-1) stays within alpha/2
    lo_idx = int(np.searchsorted(cdf, half, side="right")) - 1
    if lo_idx >= 0:
        lower_rank = lo_idx + 1
    elif cdf[0] <= alpha:
        lower_rank = 1
        notes.append(f"lower rank clamped to 1; lower miss probability {cdf[0]:.4g}")
    else:
        raise InfeasibleError(
            f"no feasible lower rank: P(X = 0) = {cdf[0]:.4g} exceeds alpha = {alpha:g}"
        )

    # smallest rank whose upper miss P(X >= U) stays within alpha/2
    up_idx = int(np.searchsorted(cdf, 1.0 - half, side="left"))
    if up_idx <= n - 1:
        upper_rank = up_idx + 1
    elif 1.0 - cdf[n - 1] <= alpha:
        upper_rank = n
        notes.append(
            f"upper rank clamped to {n}; upper miss probability {1.0 - cdf[n - 1]:.4g}"
        )
    else:
        raise InfeasibleError(
            f"no feasible upper rank at tau = {tau:g}: even the sample maximum misses "
            f"with probability {1.0 - cdf[n - 1]:.4g} > alpha = {alpha:g}"
        )

    if lower_rank > upper_rank:
        raise InfeasibleError("binomial ranks crossed; no feasible interval")
    notes.append(
        f"binomial ranks [{lower_rank}, {upper_rank}], nominal coverage at least "
        f"{cdf[upper_rank - 1] - cdf[lower_rank - 1]:.4f}"
    )
    return ConfidenceInterval(
        lower=float(sample.values[lower_rank - 1]),
        upper=float(sample.values[upper_rank - 1]),
        level=1.0 - alpha,
        method="central-binomial",
        target=TailTarget(tau=tau),
        diagnostics=notes,
    )


@dataclass
class TauStarResult:
    tau_star: float
    bias_estimate: float
    bandwidth: float
    clamped: bool
    diagnostics: list[str] = field(default_factory=list)


def _require_correction_inputs(sample: EstimateSample, ccfg: CentralConfig):
    if sample.t is None:
        raise ValidationError("the rank correction needs the series length t")
    if ccfg.sigma2 is None:
        raise ValidationError("the rank correction needs per-unit noise variances sigma2")
    if len(ccfg.sigma2) != sample.n:
        raise ValidationError("sigma2 must have one entry per unit, aligned with the sorted sample")


def normal_reference_bandwidth(sample: EstimateSample) -> float:
    """1.06 * population standard deviation * n^(-1/5)."""
    return 1.06 * float(np.std(sample.values)) * sample.n ** (-0.2)


def tau_star(sample: EstimateSample, ccfg: CentralConfig) -> TauStarResult:
    """Bias-adjusted rank probability tau* = tau + bias_hat / t.

    bias_hat is minus half the kernel-smoothed derivative estimate
    -(n h^2)^-1 sum_i sigma2_i K'((v_i - v_tau)/h) / 2 evaluated at the
    sample tau-quantile.  tau* is clamped to [1/n, 1 - 1/n].
    """
    _require_correction_inputs(sample, ccfg)
    h = ccfg.bandwidth if ccfg.bandwidth is not None else normal_reference_bandwidth(sample)
    if h <= 0:
        raise ValidationError("bandwidth must be positive (constant sample has no spread)")
    n = sample.n
    theta = empirical_quantile(sample, ccfg.tau)
    ksum = float(
        _kernels.gaussian_kernel_bias_sums(
            sample.values[None, :], ccfg.sigma2[None, :], np.array([theta]), h
        )[0]
    )
    bias = -ksum / (n * h * h) / 2.0
    raw = ccfg.tau + bias / sample.t
    tau_star = min(max(raw, 1.0 / n), 1.0 - 1.0 / n)
    clamped = tau_star != raw
    notes = [f"bandwidth {h:.6g}"]
    if clamped:
        notes.append(f"tau* clamped from {raw:.6g} to {tau_star:.6g}")
    return TauStarResult(
        tau_star=float(tau_star),
        bias_estimate=float(bias),
        bandwidth=float(h),
        clamped=clamped,
        diagnostics=notes,
    )


def corrected_quantile(sample: EstimateSample, ccfg: CentralConfig) -> float:
    """Sample order statistic at the corrected rank floor(n * tau*)."""
    res = tau_star(sample, ccfg)
    return empirical_quantile(sample, res.tau_star)


def corrected_quantile_bootstrap_ci(
    sample: EstimateSample, ccfg: CentralConfig, alpha: float, seed: int = 0
) -> ConfidenceInterval:
    """Percentile bootstrap interval for the corrected quantile.

    Units are resampled with replacement (value and noise variance move
    together) and the corrected quantile is recomputed on each resample.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    n = sample.n
    if np.all(sample.values == sample.values[0]):
        value = float(sample.values[0])
        return ConfidenceInterval(
            lower=value,
            upper=value,
            level=1.0 - alpha,
            method="central-corrected-bootstrap",
            target=TailTarget(tau=ccfg.tau),
            diagnostics=["degenerate constant sample: zero-width interval"],
        )
    _require_correction_inputs(sample, ccfg)
    h = ccfg.bandwidth if ccfg.bandwidth is not None else normal_reference_bandwidth(sample)
    if h <= 0:
        raise ValidationError("bandwidth must be positive")

    n_boot = ccfg.n_bootstrap
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    rank0 = min(max(int(np.floor(n * ccfg.tau)), 1), n)
    corrected = np.empty(n_boot)
    n_clamped = 0
    chunk = max(1, _BOOT_CHUNK_ELEMS // n)
    for lo in range(0, n_boot, chunk):
        hi = min(lo + chunk, n_boot)
        idx = rng.integers(0, n, size=(hi - lo, n))
        vals = sample.values[idx]
        sig = ccfg.sigma2[idx]
        ordered = np.sort(vals, axis=1)
        centers = ordered[:, rank0 - 1]
        ksums = _kernels.gaussian_kernel_bias_sums(vals, sig, centers, h)
        raw = ccfg.tau + (-ksums / (n * h * h) / 2.0) / sample.t
        tau_star = np.clip(raw, 1.0 / n, 1.0 - 1.0 / n)
        n_clamped += int(np.sum(tau_star != raw))
        ranks = np.clip(np.floor(n * tau_star).astype(np.int64), 1, n)
        corrected[lo:hi] = ordered[np.arange(hi - lo), ranks - 1]

    corrected.sort()
    lo_rank = min(max(int(np.ceil(alpha / 2.0 * n_boot)), 1), n_boot)
    hi_rank = min(max(int(np.ceil((1.0 - alpha / 2.0) * n_boot)), 1), n_boot)
    notes = [f"bandwidth {h:.6g}", f"bootstrap resamples {n_boot}"]
    if n_clamped:
        notes.append(f"tau* clamped in {n_clamped} resamples")
    return ConfidenceInterval(
        lower=float(corrected[lo_rank - 1]),
        upper=float(corrected[hi_rank - 1]),
        level=1.0 - alpha,
        method="central-corrected-bootstrap",
        target=TailTarget(tau=ccfg.tau),
        diagnostics=notes,
    )


def estimate_sigma2_from_panel(panel) -> np.ndarray:
    """Per-unit noise variances implied by the unit-wise OLS first stage.

    sigma2_i = t * (homoskedastic sampling variance of the unit-i
    coefficient on z), i.e. the variance of the scaled estimation error.
    Raises on rank-deficient unit designs; the first-stage runner drops
    such units instead.
    """
    y, X = design_from_panel(panel)
    t = y.shape[1]
    _, var_last, ok = batched_unit_ols(y, X)
    if not np.all(ok):
        bad = np.flatnonzero(~ok)
        raise ValidationError(
            f"rank-deficient unit design for units {bad[:10].tolist()}"
            + ("..." if bad.size > 10 else "")
        )
    return t * var_last
