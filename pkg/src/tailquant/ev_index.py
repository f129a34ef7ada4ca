"""Point estimation of the extreme-value index from the sample tail."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateTailError, InfeasibleError, ValidationError
from .sample import EstimateSample

#: Hill and PWM estimates further apart than this get a diagnostic note.
DISAGREEMENT_NOTE_THRESHOLD = 0.1


@dataclass(frozen=True)
class EVIndexEstimate:
    gamma_hat: float
    k: int
    method: str
    note: str | None = None


def default_tail_count(n: int) -> int:
    """Default number of tail statistics, floor(n^(3/5))."""
    return int(np.floor(n ** 0.6))


def _check_k(sample: EstimateSample, k: int | None) -> int:
    if k is None:
        k = default_tail_count(sample.n)
    if not 1 <= k <= sample.n - 1:
        raise ValidationError(f"k must lie in [1, {sample.n - 1}], got {k}")
    return k


def hill_estimator(sample: EstimateSample, k: int | None = None) -> EVIndexEstimate:
    """Mean log-spacing of the top k statistics over the (k+1)-th.

    Requires a tail bounded away from zero after orientation; estimates
    max(gamma, 0).
    """
    k = _check_k(sample, k)
    base = sample.values[sample.n - 1 - k]
    if base <= 0.0:
        raise ValidationError(
            "hill estimator needs the top k+1 statistics strictly positive; "
            "consider the pwm estimator for signed data"
        )
    top = sample.values[sample.n - k:]
    gamma = float(np.mean(np.log(top)) - np.log(base))
    return EVIndexEstimate(gamma_hat=gamma, k=k, method="hill")


def pwm_estimator(sample: EstimateSample, k: int | None = None) -> EVIndexEstimate:
    """Probability-weighted-moment estimator on the top k exceedances.

    Location-scale invariant; consistent for gamma < 1.
    """
    k = _check_k(sample, k)
    base = sample.values[sample.n - 1 - k]
    top_desc = sample.values[sample.n - k:][::-1]
    excess = top_desc - base
    a = float(np.mean(excess))
    b = float(np.sum(np.arange(k) * excess)) / k ** 2
    if a == 0.0 and b == 0.0:
        raise DegenerateTailError("pwm estimator undefined: top k+1 statistics are all tied")
    denom = a - 2.0 * b
    if denom == 0.0:
        raise InfeasibleError("pwm estimator undefined: a - 2b is zero")
    gamma = (a - 4.0 * b) / denom
    if not np.isfinite(gamma):
        raise InfeasibleError("pwm estimator produced a non-finite value")
    return EVIndexEstimate(gamma_hat=float(gamma), k=k, method="pwm")


def averaged_gamma(sample: EstimateSample, k: int | None = None) -> EVIndexEstimate:
    """Arithmetic mean of the Hill and PWM estimates at the same k."""
    k = _check_k(sample, k)
    hill = hill_estimator(sample, k)
    pwm = pwm_estimator(sample, k)
    note = None
    gap = abs(hill.gamma_hat - pwm.gamma_hat)
    if gap > DISAGREEMENT_NOTE_THRESHOLD:
        note = (
            f"hill ({hill.gamma_hat:.3f}) and pwm ({pwm.gamma_hat:.3f}) disagree "
            f"by {gap:.3f}; tail-index estimates at this sample size may be imprecise"
        )
    return EVIndexEstimate(
        gamma_hat=0.5 * (hill.gamma_hat + pwm.gamma_hat), k=k, method="average", note=note
    )
