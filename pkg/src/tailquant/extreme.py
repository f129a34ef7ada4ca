"""Extreme-order inference: ratio statistic, subsampled critical values,
confidence intervals, median-unbiased estimation and the support test.

The workhorse statistic is the location-scale invariant ratio

    (x[r] - center) / (x[q] - x[0]),

where x[j] is the sample order statistic at descending rank j and the
center plays the role of the target quantile at probability 1 - l/n.
Its limit law depends only on the tail index, and critical values can be
estimated by subsampling without estimating that index.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._subsampling import draw_index_sets, subsampled_pivot_table
from .exceptions import DegenerateTailError, ValidationError
from .limit_dist import CriticalValueTable, table_quantile
from .sample import ConfidenceInterval, EstimateSample, TailTarget, top_order_statistic

#: q outside this range triggers a soft warning.
RECOMMENDED_Q_RANGE = (2, 10)


@dataclass(frozen=True)
class RatioConfig:
    """Tuning triple (r, q, l) of the extreme-order ratio statistic."""

    r: int
    q: int = 2
    l: float = 1.0

    def __post_init__(self):
        if self.r < 0:
            raise ValidationError("r must be non-negative")
        if self.q < 1:
            raise ValidationError("q must be a positive integer")
        if self.l < 0:
            raise ValidationError("l must be non-negative")
        if not RECOMMENDED_Q_RANGE[0] <= self.q <= RECOMMENDED_Q_RANGE[1]:
            warnings.warn(
                f"q={self.q} is outside the recommended range "
                f"{RECOMMENDED_Q_RANGE[0]}-{RECOMMENDED_Q_RANGE[1]}",
                stacklevel=3,
            )

    @classmethod
    def mixed(cls, l: float, q: int = 2) -> "RatioConfig":
        """Center at the sample quantile matching l (r = floor(l))."""
        return cls(r=int(np.floor(l)), q=q, l=l)

    @classmethod
    def max_only(cls, l: float, q: int = 2) -> "RatioConfig":
        """Center at the sample maximum (r = 0)."""
        return cls(r=0, q=q, l=l)

    @property
    def endpoint_mode(self) -> bool:
        return self.l == 0


@dataclass(frozen=True)
class SubsampleConfig:
    """Subsample-size exponent m (b = floor(n^m)), count and seed."""

    m: float = 0.7
    n_subsamples: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.m < 1.0:
            raise ValidationError("the subsample-size exponent m must lie in (0, 1)")
        if self.n_subsamples < 1:
            raise ValidationError("need at least one subsample")

    def subsample_size(self, n: int) -> int:
        return int(np.floor(n ** self.m))


def _validate_ranks(sample: EstimateSample, rcfg: RatioConfig) -> None:
    if rcfg.q > sample.n - 1:
        raise ValidationError(f"q={rcfg.q} exceeds n-1={sample.n - 1}")
    if rcfg.r > sample.n - 1:
        raise ValidationError(f"r={rcfg.r} exceeds n-1={sample.n - 1}")


def evt_ratio_statistic(sample: EstimateSample, config: RatioConfig, center: float) -> float:
    """The ratio (x[r] - center) / (x[q] - x[0]); denominator is < 0 unless tied."""
    _validate_ranks(sample, config)
    top = top_order_statistic(sample, 0)
    delta = top_order_statistic(sample, config.q) - top
    if delta == 0.0:
        raise DegenerateTailError(
            f"top order statistics at ranks 0 and {config.q} are tied"
        )
    return (top_order_statistic(sample, config.r) - center) / delta


def _center_rank(n: int, l: float, b: int) -> int:
    # nearest-integer descending rank for the subsample centering statistic
    return min(max(int(np.floor(n * l / b + 0.5)), 0), n - 1)


def subsample_critical_values(
    sample: EstimateSample,
    rcfg: RatioConfig,
    scfg: SubsampleConfig,
    index_sets: np.ndarray | None = None,
) -> CriticalValueTable:
    """Critical-value table from the ratio statistic on random subsamples.

    Each subsample statistic is centered at the full-sample order statistic
    at descending rank round(n*l/b); for l = 0 that is the sample maximum.
    ``index_sets`` overrides the random draw with explicit subsamples (rows
    of indices into the sorted sample), e.g. for exhaustive enumeration.
    """
    n = sample.n
    b = index_sets.shape[1] if index_sets is not None else scfg.subsample_size(n)
    if b > n - 1:
        raise ValidationError(f"subsample size b={b} needs n >= b+1 (n={n})")
    if b < rcfg.q + 1:
        raise ValidationError(f"subsample size b={b} too small for q={rcfg.q}")
    if rcfg.r > b - 1:
        raise ValidationError(f"subsample size b={b} too small for r={rcfg.r}")
    if rcfg.l > b:
        raise ValidationError(f"l={rcfg.l} exceeds b={b} (centering rank would pass n)")
    if index_sets is None:
        index_sets = draw_index_sets(n, b, scfg.n_subsamples, scfg.seed)

    rank_c = _center_rank(n, rcfg.l, b)
    center = top_order_statistic(sample, rank_c)
    meta = {
        "r": rcfg.r,
        "q": rcfg.q,
        "l": rcfg.l,
        "m": scfg.m,
        "seed": scfg.seed,
        "center_rank": rank_c,
        "statistic": "extreme_ratio",
    }
    return subsampled_pivot_table(
        sample,
        index_sets,
        num_rank=rcfg.r,
        den_rank_a=rcfg.q,
        den_rank_b=0,
        center=center,
        meta=meta,
    )


def _check_table(table: CriticalValueTable, rcfg: RatioConfig) -> list[str]:
    for key, want in (("r", rcfg.r), ("q", rcfg.q), ("l", rcfg.l)):
        have = table.meta.get(key)
        if have is not None and have != want:
            raise ValidationError(
                f"critical-value table was built for {key}={have}, need {key}={want}"
            )
    notes = []
    if table.meta.get("unreliable"):
        notes.append(
            "critical-value table flagged unreliable: more than 10% of "
            "subsamples had tied denominators"
        )
    return notes


def extreme_ci(
    sample: EstimateSample,
    target: TailTarget,
    alpha: float,
    rcfg: RatioConfig,
    table: CriticalValueTable,
) -> ConfidenceInterval:
    """Location-scale equivariant interval for the quantile at 1 - l/n.

    [x[r] - c_{a/2} * D, x[r] - c_{1-a/2} * D] with D = x[q] - x[0] <= 0.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    if target.l is None or target.l != rcfg.l:
        raise ValidationError("target and ratio configuration disagree about l")
    _validate_ranks(sample, rcfg)
    notes = _check_table(table, rcfg)
    top = top_order_statistic(sample, 0)
    delta = top_order_statistic(sample, rcfg.q) - top
    if delta == 0.0:
        raise DegenerateTailError("degenerate spread: x[q] equals the sample maximum")
    anchor = top_order_statistic(sample, rcfg.r)
    lower = anchor - table_quantile(table, alpha / 2.0) * delta
    upper = anchor - table_quantile(table, 1.0 - alpha / 2.0) * delta
    notes.append(f"target: {target.describe(sample.n)}")
    return ConfidenceInterval(
        lower=lower,
        upper=upper,
        level=1.0 - alpha,
        method=f"extreme(r={rcfg.r},q={rcfg.q},cv={table.source})",
        target=target,
        diagnostics=notes,
    )


def median_unbiased_estimator(
    sample: EstimateSample,
    target: TailTarget,
    rcfg: RatioConfig,
    table: CriticalValueTable,
) -> float:
    """x[r] - c_{1/2} * D; always contained in the matching interval."""
    if target.l is None or target.l != rcfg.l:
        raise ValidationError("target and ratio configuration disagree about l")
    _validate_ranks(sample, rcfg)
    _check_table(table, rcfg)
    top = top_order_statistic(sample, 0)
    delta = top_order_statistic(sample, rcfg.q) - top
    if delta == 0.0:
        raise DegenerateTailError("degenerate spread: x[q] equals the sample maximum")
    anchor = top_order_statistic(sample, rcfg.r)
    return anchor - table_quantile(table, 0.5) * delta


@dataclass
class SupportTestResult:
    statistic: float
    critical_value: float
    reject: bool
    alpha: float
    diagnostics: list[str] = field(default_factory=list)

    @property
    def decision(self) -> str:
        return "reject" if self.reject else "fail_to_reject"


def support_test(
    sample: EstimateSample,
    c_value: float,
    q: int,
    alpha: float,
    table: CriticalValueTable,
) -> SupportTestResult:
    """One-sided test of H0: the upper endpoint is at most ``c_value``.

    Valid when the caller asserts a finite endpoint (tail index < 0); the
    table must come from the endpoint-mode statistic (l = 0, r = 0).
    Rejects when W_C = (x[0] - C) / (x[q] - x[0]) falls below the
    alpha-quantile of the table.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    if table.meta.get("l", 0.0) != 0.0 or table.meta.get("r", 0) != 0:
        raise ValidationError("support test needs a table built with l = 0 and r = 0")
    if table.meta.get("q") is not None and table.meta["q"] != q:
        raise ValidationError(f"table was built for q={table.meta['q']}, need q={q}")
    rcfg = RatioConfig(r=0, q=q, l=0.0)
    stat = evt_ratio_statistic(sample, rcfg, c_value)
    notes = _check_table(table, rcfg)
    crit = table_quantile(table, alpha)
    return SupportTestResult(
        statistic=stat,
        critical_value=crit,
        reject=bool(stat < crit),
        alpha=alpha,
        diagnostics=notes,
    )
