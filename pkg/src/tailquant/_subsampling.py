"""Shared machinery for subsampled critical-value tables.

A pivot of the form (x[a] - center) / (x[b] - x[c]) is evaluated on many
random size-b subsamples, where x[j] is the subsample order statistic at
descending rank j and ``center`` is a full-sample order statistic.
Subsamples with a tied denominator are dropped and counted; a table with
more than DEGENERATE_FRACTION_LIMIT of its subsamples dropped is flagged
unreliable.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DegenerateTailError, ValidationError
from .limit_dist import CriticalValueTable
from .sample import EstimateSample
from . import _kernels

DEGENERATE_FRACTION_LIMIT = 0.10


def draw_index_sets(n: int, b: int, n_subsamples: int, seed: int) -> np.ndarray:
    """Uniform without-replacement index sets, one sub-stream per subsample.

    Sub-stream s is derived deterministically from (seed, s), so the matrix
    does not depend on how subsamples are scheduled across workers.
    """
    children = np.random.SeedSequence(seed).spawn(n_subsamples)
    out = np.empty((n_subsamples, b), dtype=np.int64)
    for s, child in enumerate(children):
        rng = np.random.default_rng(child)
        out[s] = rng.choice(n, size=b, replace=False)
    return out


def subsampled_pivot_table(
    sample: EstimateSample,
    index_sets: np.ndarray,
    num_rank: int,
    den_rank_a: int,
    den_rank_b: int,
    center: float,
    meta: dict,
) -> CriticalValueTable:
    """Evaluate the pivot on every subsample and return the sorted table."""
    index_sets = np.asarray(index_sets, dtype=np.int64)
    if index_sets.ndim != 2:
        raise ValidationError("index sets must form an (S, b) matrix")
    if index_sets.min() < 0 or index_sets.max() >= sample.n:
        raise ValidationError("subsample indices out of range")
    b = index_sets.shape[1]
    ranks = np.array([num_rank, den_rank_a, den_rank_b], dtype=np.int64)
    if ranks.max() >= b:
        raise ValidationError("subsample size too small for the requested ranks")

    stats = _kernels.descending_order_stats(sample.values[index_sets], ranks)
    den = stats[:, 1] - stats[:, 2]
    keep = den != 0.0
    n_degenerate = int(np.sum(~keep))
    if not np.any(keep):
        raise DegenerateTailError("all subsamples have tied denominator statistics")
    draws = np.sort((stats[keep, 0] - center) / den[keep])

    frac = n_degenerate / index_sets.shape[0]
    meta = dict(meta)
    meta.update(
        {
            "b": b,
            "n_subsamples": index_sets.shape[0],
            "n_degenerate": n_degenerate,
            "unreliable": bool(frac > DEGENERATE_FRACTION_LIMIT),
            "backend": _kernels.BACKEND,
        }
    )
    return CriticalValueTable(draws=draws, source="subsampled", meta=meta)
