"""Intermediate-order inference via the self-normalized spacing statistic.

The pivot (x[k] - center) / (x[k] - x[k + floor(sqrt(k))]), with x[j] the
order statistic at descending rank j, is asymptotically standard normal.
Intervals come with normal or subsampled critical values.  The statistic
degrades when floor(sqrt(k)) is small; below ``min_s`` a warning is
attached, and it cannot be used at all when floor(sqrt(k)) = 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from ._subsampling import draw_index_sets, subsampled_pivot_table
from .exceptions import DegenerateTailError, InfeasibleError, ValidationError
from .extreme import SubsampleConfig, _center_rank
from .limit_dist import table_quantile
from .sample import ConfidenceInterval, EstimateSample, TailTarget, top_order_statistic

INSTABILITY_NOTE = "spacing uses floor(sqrt(k)) = {s} < {min_s}; the statistic may be unstable"


@dataclass(frozen=True)
class IntermediateConfig:
    """Intermediate rank k; the spacing offset floor(sqrt(k)) is derived."""

    k: int
    min_s: int = 3

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError("k must be a positive integer")
        if self.min_s < 1:
            raise ValidationError("min_s must be a positive integer")

    @property
    def s(self) -> int:
        return math.isqrt(self.k)


def _spacing_ranks(sample: EstimateSample, cfg: IntermediateConfig) -> tuple[int, int]:
    s = cfg.s
    if s == 0:
        raise InfeasibleError("floor(sqrt(k)) = 0: the spacing statistic cannot be used")
    if cfg.k + s > sample.n - 1:
        raise ValidationError(
            f"k + floor(sqrt(k)) = {cfg.k + s} exceeds n - 1 = {sample.n - 1}"
        )
    if s < cfg.min_s:
        warnings.warn(INSTABILITY_NOTE.format(s=s, min_s=cfg.min_s), stacklevel=3)
    return cfg.k, s


def spacing_statistic(sample: EstimateSample, cfg: IntermediateConfig, center: float) -> float:
    """(x[k] - center) / (x[k] - x[k + floor(sqrt(k))])."""
    k, s = _spacing_ranks(sample, cfg)
    anchor = top_order_statistic(sample, k)
    spread = anchor - top_order_statistic(sample, k + s)
    if spread == 0.0:
        raise DegenerateTailError(f"order statistics at ranks {k} and {k + s} are tied")
    return (anchor - center) / spread


def _interval(sample, cfg, alpha, c_lo, c_hi, cv_source, notes):
    k, s = _spacing_ranks(sample, cfg)
    anchor = top_order_statistic(sample, k)
    spread = anchor - top_order_statistic(sample, k + s)
    if spread == 0.0:
        raise DegenerateTailError(f"order statistics at ranks {k} and {k + s} are tied")
    if s < cfg.min_s:
        notes = notes + [INSTABILITY_NOTE.format(s=s, min_s=cfg.min_s)]
    return ConfidenceInterval(
        lower=anchor - c_hi * spread,
        upper=anchor - c_lo * spread,
        level=1.0 - alpha,
        method=f"intermediate(k={cfg.k},cv={cv_source})",
        target=TailTarget(tau=1.0 - cfg.k / sample.n),
        diagnostics=notes,
    )


def intermediate_ci_normal(
    sample: EstimateSample, cfg: IntermediateConfig, alpha: float
) -> ConfidenceInterval:
    """Interval with standard-normal critical values."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    z = float(ndtri(1.0 - alpha / 2.0))
    return _interval(sample, cfg, alpha, -z, z, "normal", [])


def subsample_rank(k: int, n: int, b: int) -> int:
    """Map the full-sample rank k to the subsample rank floor(b^delta).

    delta = log(k)/log(n) preserves the rate exponent, keeping the
    subsample statistic in the intermediate regime.  This mapping is a
    convention of this library, not part of the underlying theory.
    """
    delta = math.log(k) / math.log(n)
    return max(1, int(np.floor(b ** delta)))


def intermediate_ci_subsampled(
    sample: EstimateSample,
    cfg: IntermediateConfig,
    alpha: float,
    scfg: SubsampleConfig,
    index_sets: np.ndarray | None = None,
) -> ConfidenceInterval:
    """Interval with critical values from the statistic on size-b subsamples.

    Each subsample pivot uses the mapped rank k_b = floor(b^(log k/log n))
    and is centered at the full-sample order statistic at descending rank
    round(n*k_b/b).  Requires k_b >= 4 so the subsample spacing offset is
    at least 2.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    n = sample.n
    b = index_sets.shape[1] if index_sets is not None else scfg.subsample_size(n)
    k_b = subsample_rank(cfg.k, n, b)
    s_b = math.isqrt(k_b)
    if k_b < 4:
        raise InfeasibleError(
            f"mapped subsample rank k_b={k_b} < 4: subsampling infeasible for k={cfg.k}"
        )
    if b < k_b + s_b + 1:
        raise InfeasibleError(f"subsample size b={b} too small for k_b={k_b}")
    if b > n - 1:
        raise ValidationError(f"subsample size b={b} needs n >= b+1 (n={n})")
    if index_sets is None:
        index_sets = draw_index_sets(n, b, scfg.n_subsamples, scfg.seed)

    rank_c = _center_rank(n, k_b, b)
    center = top_order_statistic(sample, rank_c)
    meta = {
        "k": cfg.k,
        "k_b": k_b,
        "s_b": s_b,
        "m": scfg.m,
        "seed": scfg.seed,
        "center_rank": rank_c,
        "statistic": "intermediate_spacing",
        "rank_mapping": "k_b = floor(b^(log k/log n)), a convention of this library",
    }
    table = subsampled_pivot_table(
        sample,
        index_sets,
        num_rank=k_b,
        den_rank_a=k_b,
        den_rank_b=k_b + s_b,
        center=center,
        meta=meta,
    )
    notes = []
    if table.meta["unreliable"]:
        notes.append(
            "critical-value table flagged unreliable: more than 10% of "
            "subsamples had tied denominators"
        )
    c_lo = table_quantile(table, alpha / 2.0)
    c_hi = table_quantile(table, 1.0 - alpha / 2.0)
    return _interval(sample, cfg, alpha, c_lo, c_hi, "subsampled", notes)
