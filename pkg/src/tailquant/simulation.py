"""Synthetic panel generator, first-stage estimation, and the Monte Carlo
coverage/length experiment runner.

The data-generating process: unit coefficients (alpha_i, eta_i, theta_i)
come from a Gaussian copula with one-sided power-law marginals
F(v) = 1 - (v+1)^(-kappa); covariates load positively on the coefficients;
the regression noise is a symmetric two-sided power law rescaled so its
variance matches var(theta).  The coefficient on z is the latent quantity
whose tail quantiles the inference methods target.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.special import ndtr

from . import __version__ as _version
from ._ols import batched_unit_ols, design_from_panel
from .central import CentralConfig, binomial_ci, corrected_quantile_bootstrap_ci
from .ev_index import pwm_estimator
from .exceptions import DegenerateTailError, InfeasibleError, ValidationError
from .extreme import RatioConfig, SubsampleConfig, extreme_ci, subsample_critical_values
from .intermediate import IntermediateConfig, intermediate_ci_normal, intermediate_ci_subsampled
from .limit_dist import LimitLawSpec, sample_limit_ratio
from .sample import EstimateSample, TailTarget


@dataclass(frozen=True)
class DGPConfig:
    """Simulation design parameters.

    sigma_x = 3 calibrates the covariate spread so the first-stage noise
    reproduces the documented qualitative behaviour of the design: extreme
    intervals near-nominal at the 0.99 quantile, raw central intervals
    poor but not degenerate at the 0.90 quantile.  Smaller values make the
    per-unit regressions so noisy that every method breaks down.
    """

    n: int
    t: int
    kappa: float = 4.0
    beta: float = 8.0
    rho: float = 0.3
    sigma_x: float = 3.0
    seed: int = 0
    noiseless: bool = False

    def __post_init__(self):
        if self.n < 2 or self.t < 1:
            raise ValidationError("need n >= 2 units and t >= 1 periods")
        if self.kappa <= 2:
            raise ValidationError("kappa must exceed 2 so var(theta) is finite")
        if self.beta <= 2:
            raise ValidationError("beta must exceed 2 so var(u) is finite")
        if not -0.5 < self.rho < 1.0:
            raise ValidationError("exchangeable 3x3 correlation needs rho in (-1/2, 1)")
        if self.sigma_x <= 0:
            raise ValidationError("sigma_x must be positive")


@dataclass(frozen=True)
class PanelData:
    """Generated or ingested per-unit time series (arrays stacked over units)."""

    y: np.ndarray  # (n, t)
    z: np.ndarray  # (n, t)
    x: np.ndarray | None = None  # (n, t) or (n, t, k) extra regressors
    alpha: np.ndarray | None = None  # latent intercepts, generated panels only
    eta: np.ndarray | None = None
    theta: np.ndarray | None = None
    unit_ids: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def t(self) -> int:
        return self.y.shape[1]


def frechet_like_quantile(kappa: float, u):
    """Quantile function of F(v) = 1 - (v+1)^(-kappa) on [0, infinity)."""
    if kappa <= 0:
        raise ValidationError("kappa must be positive")
    arr = np.asarray(u, dtype=np.float64)
    if np.any(arr < 0) or np.any(arr >= 1):
        raise ValidationError("quantile argument must lie in [0, 1)")
    out = (1.0 - arr) ** (-1.0 / kappa) - 1.0
    return float(out) if np.isscalar(u) else out


def frechet_like_cdf(kappa: float, v):
    arr = np.asarray(v, dtype=np.float64)
    return np.where(arr < 0, 0.0, 1.0 - (arr + 1.0) ** (-kappa))


def theta_variance(kappa: float) -> float:
    """Closed-form var(theta): kappa/(kappa-2) - (kappa/(kappa-1))^2."""
    if kappa <= 2:
        raise ValidationError("kappa must exceed 2")
    return kappa / (kappa - 2.0) - (kappa / (kappa - 1.0)) ** 2


def noise_variance(beta: float) -> float:
    """Closed-form var(u) for the two-sided power-law noise."""
    if beta <= 2:
        raise ValidationError("beta must exceed 2")
    return beta / (beta - 2.0) - 2.0 * beta / (beta - 1.0) + 1.0


def _noise(rng: np.random.Generator, beta: float, size) -> np.ndarray:
    signs = rng.integers(0, 2, size=size) * 2.0 - 1.0
    magnitudes = (1.0 - rng.random(size=size)) ** (-1.0 / beta) - 1.0
    return signs * magnitudes


def sample_noise(beta: float, count: int, seed: int = 0) -> np.ndarray:
    """iid draws from the symmetric density beta*(1+|x|)^(-beta-1)/2."""
    if beta <= 0:
        raise ValidationError("beta must be positive")
    if count < 1:
        raise ValidationError("count must be positive")
    return _noise(np.random.default_rng(np.random.SeedSequence(seed)), beta, count)


def sample_coefficients(cfg: DGPConfig, rng: np.random.Generator | None = None):
    """(alpha_i, eta_i, theta_i) from the Gaussian copula with power-law marginals."""
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    corr = np.full((3, 3), cfg.rho)
    np.fill_diagonal(corr, 1.0)
    chol = np.linalg.cholesky(corr)
    normal_scores = rng.standard_normal((cfg.n, 3)) @ chol.T
    coeffs = frechet_like_quantile(cfg.kappa, ndtr(normal_scores))
    return coeffs[:, 0], coeffs[:, 1], coeffs[:, 2]


def generate_panel(cfg: DGPConfig, rng: np.random.Generator | None = None) -> PanelData:
    """Draw one panel: coefficients, covariates, noise and outcomes."""
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    alpha, eta, theta = sample_coefficients(cfg, rng)
    # per-observation uniform shocks: a time-constant shock would make the
    # covariates collinear with the intercept within each unit
    loading = cfg.sigma_x * np.sqrt(
        1.0 + 0.3 * np.linalg.norm(np.column_stack([alpha, eta, theta]), axis=1)
    )[:, None]
    x = 0.3 * eta[:, None] + loading * (0.1 + rng.random((cfg.n, cfg.t)))
    z = 0.3 * theta[:, None] + loading * (0.1 + rng.random((cfg.n, cfg.t)))
    if cfg.noiseless:
        shock = 0.0
    else:
        scale = np.sqrt(theta_variance(cfg.kappa) / noise_variance(cfg.beta))
        shock = scale * _noise(rng, cfg.beta, (cfg.n, cfg.t))
    y = alpha[:, None] + eta[:, None] * x + theta[:, None] * z + shock
    return PanelData(y=y, z=z, x=x, alpha=alpha, eta=eta, theta=theta)


@dataclass
class FirstStageResult:
    sample: EstimateSample
    sigma2: np.ndarray  # aligned with sample.values
    dropped_units: list[int]


def unitwise_ols(panel: PanelData) -> FirstStageResult:
    """Per-unit OLS of y on [1, x..., z]; the estimate is the coefficient on z.

    Rank-deficient units are dropped with a diagnostic, never imputed.
    Returns the sorted estimate sample (t set, p = 1/2) and the per-unit
    noise variances aligned with the sorted values.
    """
    y, X = design_from_panel(panel)
    coef, var_last, ok = batched_unit_ols(y, X)
    dropped = np.flatnonzero(~ok).tolist()
    if np.sum(ok) < 2:
        raise ValidationError("fewer than 2 units with full-rank designs")
    estimates = coef[ok, -1]
    sigma2 = panel.t * var_last[ok]
    order = np.argsort(estimates, kind="stable")
    sample = EstimateSample(
        values=estimates[order], n=int(np.sum(ok)), t=panel.t, p=0.5, side="right"
    )
    return FirstStageResult(sample=sample, sigma2=sigma2[order], dropped_units=dropped)


# ---------------------------------------------------------------------------
# rate diagnostics

_FLAG_SMALL = 0.5
_FLAG_LARGE = 2.0


@dataclass(frozen=True)
class RateDiagnostic:
    """Finite-sample magnitude of an asymptotic rate expression.

    Advisory only: the underlying conditions are limits, and a small
    magnitude merely suggests that estimation noise is unlikely to
    dominate the tail.
    """

    value: float
    flag: str
    regime: str
    noise: str


def rate_diagnostic(
    n: int,
    t: int,
    p: float,
    noise,
    gamma_prime: float,
    regime: str,
    delta: float | None = None,
) -> RateDiagnostic:
    """Evaluate the sufficient-condition rate magnitude.

    ``noise`` is either a moment order (number of finite noise moments,
    beta > 0) or the string "normal".  The intermediate regime needs the
    rank exponent ``delta`` in (0, 1); its free parameter nu is fixed at 0.
    """
    if n < 2 or t <= 1 or p <= 0:
        raise ValidationError("need n >= 2, t > 1 and p > 0")
    normal = isinstance(noise, str)
    if normal and noise != "normal":
        raise ValidationError(f"noise must be a moment order or 'normal', got {noise!r}")
    if not normal and noise <= 0:
        raise ValidationError("the noise moment order must be positive")
    if regime == "extreme":
        if normal:
            value = n ** (-gamma_prime) * math.sqrt(math.log(n)) / t ** p
        else:
            beta = float(noise)
            value = n ** (1.0 / beta - gamma_prime) * math.log(t) ** (1.0 / beta) / t ** p
    elif regime == "intermediate":
        if delta is None or not 0.0 < delta < 1.0:
            raise ValidationError("the intermediate regime needs delta in (0, 1)")
        if normal:
            exponent = delta / 2.0 + (1.0 - delta) * (-gamma_prime)
            value = n ** exponent * math.sqrt(math.log(n)) / t ** p
        else:
            beta = float(noise)
            exponent = delta / 2.0 * (1.0 + 1.0 / beta) + (1.0 - delta) * (-gamma_prime + 1.0 / beta)
            value = n ** exponent / t ** p
    else:
        raise ValidationError(f"regime must be 'extreme' or 'intermediate', got {regime!r}")
    if value < _FLAG_SMALL:
        flag = "small"
    elif value > _FLAG_LARGE:
        flag = "large"
    else:
        flag = "moderate"
    return RateDiagnostic(
        value=float(value), flag=flag, regime=regime, noise="normal" if normal else f"moments({noise:g})"
    )


# ---------------------------------------------------------------------------
# coverage experiment

REPORT_COLUMNS = (
    "method",
    "target_tau",
    "l_or_k",
    "coverage",
    "mean_length",
    "n_ok",
    "n_infeasible",
    "n_degenerate",
)


@dataclass
class ExperimentRow:
    method: str
    target_tau: float
    l_or_k: float
    coverage: float
    mean_length: float
    n_ok: int
    n_infeasible: int
    n_degenerate: int


@dataclass
class ExperimentReport:
    rows: list[ExperimentRow]
    meta: dict = field(default_factory=dict)

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in self.rows:
            writer.writerow([repr(getattr(row, c)) if isinstance(getattr(row, c), float) else getattr(row, c) for c in REPORT_COLUMNS])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text

    def to_json(self, path=None) -> str:
        payload = {"meta": self.meta, "rows": [asdict(r) for r in self.rows]}
        text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=True)
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text


@dataclass(frozen=True)
class HarnessKnobs:
    """Method tuning shared across replications."""

    q: int = 2
    subsample_m: float = 0.7
    n_subsamples: int = 1000
    n_bootstrap: int = 1000
    sim_draws: int = 100_000
    level: float = 0.95


def _seed_of(ss: np.random.SeedSequence) -> int:
    return int(ss.generate_state(1, np.uint64)[0])


def _extreme_l(n: int, tau: float) -> float:
    # round away float noise in n*(1-tau) so floor(l) lands on the intended rank
    return round(n * (1.0 - tau), 9)


def _intermediate_k(n: int, tau: float) -> int:
    return max(1, int(np.floor(n * (1.0 - tau) + 0.5)))


def _run_extreme(sample, sigma2, tau, knobs, stream, r_policy, simulated):
    l = _extreme_l(sample.n, tau)
    rcfg = RatioConfig.mixed(l, q=knobs.q) if r_policy == "mixed" else RatioConfig.max_only(l, q=knobs.q)
    if simulated:
        gamma_hat = pwm_estimator(sample).gamma_hat
        if gamma_hat >= 0 and l == 0:
            raise InfeasibleError("endpoint mode needs a negative tail index estimate")
        spec = LimitLawSpec(gamma=gamma_hat, r=rcfg.r, q=rcfg.q, l=l)
        table = sample_limit_ratio(spec, n_draws=knobs.sim_draws, seed=_seed_of(stream))
    else:
        scfg = SubsampleConfig(m=knobs.subsample_m, n_subsamples=knobs.n_subsamples, seed=_seed_of(stream))
        table = subsample_critical_values(sample, rcfg, scfg)
    alpha = 1.0 - knobs.level
    return extreme_ci(sample, TailTarget(l=l), alpha, rcfg, table)


def _run_intermediate(sample, sigma2, tau, knobs, stream, subsampled):
    cfg = IntermediateConfig(k=_intermediate_k(sample.n, tau))
    alpha = 1.0 - knobs.level
    if subsampled:
        scfg = SubsampleConfig(m=knobs.subsample_m, n_subsamples=knobs.n_subsamples, seed=_seed_of(stream))
        return intermediate_ci_subsampled(sample, cfg, alpha, scfg)
    return intermediate_ci_normal(sample, cfg, alpha)


def _run_binomial(sample, sigma2, tau, knobs, stream):
    return binomial_ci(sample, tau, 1.0 - knobs.level)


def _run_corrected(sample, sigma2, tau, knobs, stream):
    ccfg = CentralConfig(tau=tau, sigma2=sigma2, n_bootstrap=knobs.n_bootstrap)
    return corrected_quantile_bootstrap_ci(sample, ccfg, 1.0 - knobs.level, seed=_seed_of(stream))


#: simulation-study method menu; 1x extreme, 2x intermediate, 3x central
METHOD_CODES = ("1a", "1b", "1c", "2a", "2b", "3a", "3b")

_METHOD_RUNNERS = {
    "1a": lambda s, v, tau, kn, st: _run_extreme(s, v, tau, kn, st, "mixed", False),
    "1b": lambda s, v, tau, kn, st: _run_extreme(s, v, tau, kn, st, "max", False),
    "1c": lambda s, v, tau, kn, st: _run_extreme(s, v, tau, kn, st, "mixed", True),
    "2a": lambda s, v, tau, kn, st: _run_intermediate(s, v, tau, kn, st, False),
    "2b": lambda s, v, tau, kn, st: _run_intermediate(s, v, tau, kn, st, True),
    "3a": _run_binomial,
    "3b": _run_corrected,
}


def _target_prob(code: str, n: int, tau: float) -> float:
    # the probability whose latent quantile the method actually targets
    if code in ("2a", "2b"):
        return 1.0 - _intermediate_k(n, tau) / n
    return tau


def _l_or_k(code: str, n: int, tau: float) -> float:
    if code in ("1a", "1b", "1c"):
        return _extreme_l(n, tau)
    if code in ("2a", "2b"):
        return float(_intermediate_k(n, tau))
    return float(min(max(int(np.floor(n * tau)), 1), n))


def _normalize_methods(methods):
    out = []
    for entry in methods:
        if isinstance(entry, str):
            if entry not in _METHOD_RUNNERS:
                raise ValidationError(f"unknown method code {entry!r}; known: {METHOD_CODES}")
            out.append((entry, _METHOD_RUNNERS[entry]))
        else:
            name, fn = entry
            out.append((str(name), fn))
    return out


def run_coverage_experiment(
    cfg: DGPConfig,
    methods,
    targets,
    n_reps: int,
    level: float = 0.95,
    seed: int = 0,
    threads: int = 1,
    knobs: HarnessKnobs | None = None,
) -> ExperimentReport:
    """Coverage and mean length of each method at each target quantile.

    ``methods`` mixes menu codes ("1a".."3b") and (name, callable) pairs
    with signature fn(sample, sigma2, tau, alpha, seed) -> interval.
    Each replication draws its RNG streams from (seed, replication index),
    so reports are bit-identical for any thread count.  Failures are
    recorded per replication, never raised.
    """
    if n_reps < 1:
        raise ValidationError("n_reps must be positive")
    if not 0.0 < level < 1.0:
        raise ValidationError("level must lie in (0, 1)")
    knobs = replace(knobs or HarnessKnobs(), level=level)
    named = _normalize_methods(methods)
    targets = [float(tau) for tau in targets]
    for tau in targets:
        if not 0.0 < tau < 1.0:
            raise ValidationError("target quantile probabilities must lie in (0, 1)")

    n_cells = len(named) * len(targets)
    # status codes: 0 ok, 1 infeasible, 2 degenerate
    status = np.zeros((n_reps, n_cells), dtype=np.int8)
    covered = np.zeros((n_reps, n_cells), dtype=bool)
    lengths = np.full((n_reps, n_cells), np.nan)

    truths = np.empty(n_cells)
    cell_info = []
    for i, (code, _) in enumerate(named):
        for j, tau in enumerate(targets):
            cell = i * len(targets) + j
            prob = _target_prob(code, cfg.n, tau) if code in _METHOD_RUNNERS else tau
            truths[cell] = frechet_like_quantile(cfg.kappa, prob)
            cell_info.append((code, tau))

    rep_seeds = np.random.SeedSequence(seed).spawn(n_reps)

    def one_rep(rep: int) -> None:
        streams = rep_seeds[rep].spawn(1 + n_cells)
        panel = generate_panel(cfg, np.random.default_rng(streams[0]))
        try:
            first = unitwise_ols(panel)
        except ValidationError:
            status[rep, :] = 1
            return
        for cell, ((code, runner), tau) in enumerate(
            (m, tau) for m in named for tau in targets
        ):
            try:
                if code in _METHOD_RUNNERS:
                    ci = runner(first.sample, first.sigma2, tau, knobs, streams[1 + cell])
                else:
                    ci = runner(
                        first.sample, first.sigma2, tau, 1.0 - level, _seed_of(streams[1 + cell])
                    )
            except DegenerateTailError:
                status[rep, cell] = 2
            except (InfeasibleError, ValidationError):
                status[rep, cell] = 1
            else:
                covered[rep, cell] = ci.contains(truths[cell])
                lengths[rep, cell] = ci.length

    # warning filters are process-global (catch_warnings is not thread-safe),
    # so suppress once out here rather than inside the workers
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(one_rep, range(n_reps)))
        else:
            for rep in range(n_reps):
                one_rep(rep)

    rows = []
    for cell, (code, tau) in enumerate(cell_info):
        ok = status[:, cell] == 0
        n_ok = int(np.sum(ok))
        rows.append(
            ExperimentRow(
                method=code,
                target_tau=tau,
                l_or_k=_l_or_k(code, cfg.n, tau) if code in _METHOD_RUNNERS else tau,
                coverage=float(np.sum(covered[:, cell])) / n_reps,
                mean_length=float(np.mean(lengths[ok, cell])) if n_ok else float("nan"),
                n_ok=n_ok,
                n_infeasible=int(np.sum(status[:, cell] == 1)),
                n_degenerate=int(np.sum(status[:, cell] == 2)),
            )
        )
    meta = {
        "version": _version,
        "dgp": asdict(cfg),
        "n_reps": n_reps,
        "level": level,
        "seed": seed,
        "knobs": asdict(knobs),
        "methods": [name for name, _ in named],
        "targets": targets,
    }
    return ExperimentReport(rows=rows, meta=meta)
