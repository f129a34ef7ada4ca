"""Sample container, order-statistic access and tail orientation.

Every inference routine in this package works on the right tail of an
:class:`EstimateSample`.  Left-tail questions are handled by storing the
negated data (``side="left"``), so that the j-th largest stored value is
minus the (j+1)-th smallest original value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ValidationError


@dataclass(frozen=True)
class EstimateSample:
    """Immutable sorted collection of per-unit estimates.

    ``values`` is sorted ascending.  ``t`` and ``p`` describe the first
    stage that produced the estimates (series length and convergence-rate
    exponent); both are optional because estimates-only input carries no
    first-stage information.
    """

    values: np.ndarray
    n: int
    t: int | None = None
    p: float | None = None
    side: str = "right"

    def __post_init__(self):
        if self.side not in ("right", "left"):
            raise ValidationError(f"side must be 'right' or 'left', got {self.side!r}")
        if self.n != len(self.values):
            raise ValidationError("n does not match the number of values")
        if self.n < 2:
            raise ValidationError("need at least 2 estimates")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("sample values must be finite")
        if np.any(np.diff(self.values) < 0):
            raise ValidationError("sample values must be sorted ascending")
        if self.t is not None and self.t < 1:
            raise ValidationError("t must be a positive integer")
        if self.p is not None and self.p <= 0:
            raise ValidationError("p must be positive")
        self.values.setflags(write=False)


def make_sample(raw, t=None, p=None, side="right") -> EstimateSample:
    """Build an :class:`EstimateSample` from raw estimates.

    For ``side="left"`` the stored values are the negated originals,
    re-sorted, so every right-tail operation applies unchanged.
    """
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 1:
        raise ValidationError("raw estimates must be one-dimensional")
    if arr.size == 0:
        raise ValidationError("raw estimates are empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("raw estimates contain non-finite values")
    if side == "left":
        arr = -arr
    return EstimateSample(values=np.sort(arr), n=arr.size, t=t, p=p, side=side)


def top_order_statistic(sample: EstimateSample, j: int) -> float:
    """Value at descending rank ``j`` (j = 0 is the sample maximum)."""
    if not 0 <= j <= sample.n - 1:
        raise ValidationError(f"descending rank {j} out of range for n={sample.n}")
    return float(sample.values[sample.n - 1 - j])


def empirical_quantile(sample: EstimateSample, tau: float) -> float:
    """Sample quantile at ascending rank ``floor(n*tau)`` clamped to [1, n]."""
    if not 0.0 < tau < 1.0:
        raise ValidationError(f"tau must lie in (0, 1), got {tau}")
    rank = min(max(int(np.floor(sample.n * tau)), 1), sample.n)
    return float(sample.values[rank - 1])


@dataclass(frozen=True)
class TailTarget:
    """Which population quantile an interval or test is aimed at.

    Exactly one of ``l`` and ``tau`` is set.  ``l`` targets the drifting
    quantile at probability 1 - l/n; ``l = 0`` targets the upper endpoint
    and is only meaningful when the caller asserts a finite endpoint.
    ``tau`` targets the fixed quantile at probability tau.
    """

    l: float | None = None
    tau: float | None = None

    def __post_init__(self):
        if (self.l is None) == (self.tau is None):
            raise ValidationError("set exactly one of l and tau")
        if self.l is not None and self.l < 0:
            raise ValidationError("l must be non-negative")
        if self.tau is not None and not 0.0 < self.tau < 1.0:
            raise ValidationError("tau must lie in (0, 1)")

    def describe(self, n: int | None = None) -> str:
        if self.l is not None:
            if self.l == 0:
                return "upper endpoint of the latent distribution"
            if n:
                return f"latent quantile at probability 1 - {self.l:g}/{n} (shifts with n)"
            return f"latent quantile at probability 1 - {self.l:g}/n (shifts with n)"
        return f"latent quantile at probability {self.tau:g}"


@dataclass
class ConfidenceInterval:
    """Ordered endpoint pair with level, method tag and target description."""

    lower: float
    upper: float
    level: float
    method: str
    target: TailTarget
    diagnostics: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValidationError(f"interval endpoints out of order: [{self.lower}, {self.upper}]")
        if not 0.0 < self.level < 1.0:
            raise ValidationError("level must lie in (0, 1)")

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


@dataclass(frozen=True)
class AffineTransform:
    """Record of a standardization so results can be mapped back."""

    mean: float
    scale: float

    def apply(self, x):
        return (np.asarray(x, dtype=np.float64) - self.mean) / self.scale

    def invert(self, x):
        return np.asarray(x, dtype=np.float64) * self.scale + self.mean


def standardize(sample: EstimateSample) -> tuple[EstimateSample, AffineTransform]:
    """Center at the sample mean and scale to unit population variance.

    Uses the divide-by-n variance convention; the returned transform maps
    standardized results back to the original scale.
    """
    mean = float(np.mean(sample.values))
    scale = float(np.std(sample.values))  # ddof=0
    if scale == 0.0:
        raise ValidationError("cannot standardize a constant sample")
    transform = AffineTransform(mean=mean, scale=scale)
    out = EstimateSample(
        values=transform.apply(sample.values),
        n=sample.n,
        t=sample.t,
        p=sample.p,
        side=sample.side,
    )
    return out, transform
