"""Sampler and quantile table for the limit law of the extreme-order ratio.

The ratio of top order statistics converges to a non-pivotal law indexed
by the tail index gamma.  This module draws from that law (for simulated
critical values and for testing the subsampling engine) and provides the
empirical-quantile lookup shared with subsampled tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ValidationError
from . import _kernels

DEFAULT_N_DRAWS = 100_000
_CHUNK = 1 << 17


@dataclass(frozen=True)
class LimitLawSpec:
    """Parameters of the ratio limit law: tail index and tuning (r, q, l)."""

    gamma: float
    r: int = 0
    q: int = 2
    l: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.gamma):
            raise ValidationError("gamma must be finite")
        if self.q < 1:
            raise ValidationError("q must be a positive integer")
        if self.r < 0:
            raise ValidationError("r must be non-negative")
        if self.l < 0:
            raise ValidationError("l must be non-negative")
        if self.l == 0 and self.gamma >= 0:
            raise ValidationError("l = 0 (endpoint mode) requires gamma < 0")
        if self.gamma == 0 and self.l == 0:
            raise ValidationError("the gamma = 0 log form needs l > 0")


@dataclass
class CriticalValueTable:
    """Sorted empirical distribution of a pivot with quantile lookup."""

    draws: np.ndarray
    source: str  # "simulated" | "subsampled"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.draws = np.asarray(self.draws, dtype=np.float64)
        if self.draws.size == 0:
            raise ValidationError("critical value table is empty")
        if np.any(np.diff(self.draws) < 0):
            raise ValidationError("table draws must be sorted ascending")


def table_quantile(table: CriticalValueTable, alpha: float) -> float:
    """Empirical alpha-quantile of the table, rank ceil(alpha * m)."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    m = table.draws.size
    rank = int(np.ceil(alpha * m))
    return float(table.draws[min(max(rank, 1), m) - 1])


def sample_limit_ratio(
    spec: LimitLawSpec,
    n_draws: int = DEFAULT_N_DRAWS,
    seed: int = 0,
) -> CriticalValueTable:
    """Draw ``n_draws`` independent realizations of the ratio limit law.

    Each draw uses one fresh set of iid standard exponentials, accumulated
    into the partial sums entering the ratio.  Draws are generated in
    fixed-size chunks from sub-streams spawned off the master seed, and
    placed by chunk index, so the output is reproducible regardless of how
    chunks are scheduled.
    """
    if n_draws < 1:
        raise ValidationError("n_draws must be at least 1")
    m = max(spec.r, spec.q) + 1
    out = np.empty(n_draws, dtype=np.float64)
    n_chunks = (n_draws + _CHUNK - 1) // _CHUNK
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    for i in range(n_chunks):
        lo = i * _CHUNK
        hi = min(lo + _CHUNK, n_draws)
        rng = np.random.default_rng(children[i])
        exps = rng.standard_exponential((hi - lo, m))
        out[lo:hi] = _kernels.limit_ratio_from_exponentials(
            exps, spec.gamma, spec.r, spec.q, spec.l
        )
    out.sort()
    meta = {
        "gamma": spec.gamma,
        "r": spec.r,
        "q": spec.q,
        "l": spec.l,
        "n_draws": n_draws,
        "seed": seed,
        "backend": _kernels.BACKEND,
    }
    return CriticalValueTable(draws=out, source="simulated", meta=meta)


def cache_key(spec: LimitLawSpec, n_draws: int, seed: int) -> str:
    """Stable file-name key for a simulated table."""
    return (
        f"ratio_gamma{spec.gamma:.6g}_r{spec.r}_q{spec.q}_l{spec.l:.6g}"
        f"_n{n_draws}_s{seed}"
    )


def save_table(table: CriticalValueTable, path) -> None:
    """Serialize a table to a flat binary (.npz) cache file."""
    np.savez(
        path,
        draws=table.draws,
        source=np.array(table.source),
        meta=np.array(json.dumps(table.meta, sort_keys=True)),
    )


def load_table(path) -> CriticalValueTable:
    with np.load(path, allow_pickle=False) as data:
        return CriticalValueTable(
            draws=data["draws"],
            source=str(data["source"]),
            meta=json.loads(str(data["meta"])),
        )
