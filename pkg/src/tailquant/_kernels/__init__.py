"""Hot numerical kernels with a compiled core and a pure-numpy fallback.

The compiled backend (``_ckernels``, built from Cython) is preferred when
importable; otherwise the numpy fallback is used transparently.  Set the
environment variable ``TAILQUANT_PURE_PYTHON=1`` before import to force
the fallback, e.g. for benchmarking.  Each backend is deterministic; the
two agree to floating-point rounding (order-statistic selection exactly).
"""

import os

import numpy as np

from . import _pykernels

if os.environ.get("TAILQUANT_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def descending_order_stats(values, ranks):
    """Order statistics of each row at the given descending ranks (0 = max)."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    ranks = np.ascontiguousarray(ranks, dtype=np.int64)
    if values.ndim != 2 or ranks.ndim != 1:
        raise ValueError("values must be (S, b) and ranks one-dimensional")
    if ranks.size and (ranks.min() < 0 or ranks.max() >= values.shape[1]):
        raise ValueError("descending ranks out of range for subsample size")
    return _impl.descending_order_stats(values, ranks)


def limit_ratio_from_exponentials(exps, gamma, r, q, l):
    """Ratio-statistic realizations from rows of iid standard exponentials."""
    exps = np.ascontiguousarray(exps, dtype=np.float64)
    if exps.ndim != 2 or exps.shape[1] < max(r, q) + 1:
        raise ValueError("need max(r, q) + 1 exponentials per draw")
    return _impl.limit_ratio_from_exponentials(exps, float(gamma), int(r), int(q), float(l))


def gaussian_kernel_bias_sums(values, sigma2, centers, h):
    """Row-wise weighted Gaussian kernel-derivative sums."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    sigma2 = np.ascontiguousarray(sigma2, dtype=np.float64)
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    if values.shape != sigma2.shape or centers.shape != (values.shape[0],):
        raise ValueError("shape mismatch between values, sigma2 and centers")
    return _impl.gaussian_kernel_bias_sums(values, sigma2, centers, float(h))
