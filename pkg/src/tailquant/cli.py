"""Batch command-line interface.

Subcommands: ``ci`` (confidence intervals / tail sweeps), ``gamma``
(tail-index estimation), ``test-support`` (endpoint hypothesis test),
``estimate`` (point estimates), ``simulate`` (Monte Carlo coverage
experiment) and ``diagnose`` (rate-condition magnitudes).

Input is CSV (estimates or long-format panel), output is a JSON report
embedding the resolved configuration and seed, so re-running the printed
configuration reproduces the artifact bit for bit.  The seed can also be
supplied through the TAILQUANT_SEED environment variable; an explicit
flag always wins.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import __version__, _kernels
from .central import CentralConfig, binomial_ci, corrected_quantile, corrected_quantile_bootstrap_ci
from .data_io import read_estimates_csv, read_panel_csv, write_estimates_csv, write_panel_csv
from .ev_index import averaged_gamma, default_tail_count, hill_estimator, pwm_estimator
from .exceptions import InfeasibleError, ValidationError
from .extreme import (
    RatioConfig,
    SubsampleConfig,
    extreme_ci,
    median_unbiased_estimator,
    subsample_critical_values,
    support_test,
)
from .intermediate import IntermediateConfig, intermediate_ci_normal, intermediate_ci_subsampled
from .limit_dist import LimitLawSpec, sample_limit_ratio
from .sample import empirical_quantile, make_sample, standardize, top_order_statistic, TailTarget
from .simulation import (
    DGPConfig,
    HarnessKnobs,
    generate_panel,
    rate_diagnostic,
    run_coverage_experiment,
    unitwise_ols,
)

SEED_ENV_VAR = "TAILQUANT_SEED"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3

#: simulation-menu shorthand for the descriptive method names
METHOD_ALIASES = {
    "1a": "extreme-mixed",
    "1b": "extreme-max",
    "1c": "extreme-simulated",
    "2a": "intermediate-normal",
    "2b": "intermediate-subsampled",
    "3a": "central-binomial",
    "3b": "central-corrected",
}
CI_METHODS = tuple(METHOD_ALIASES.values())

#: rough rank count separating extreme-order from central-order use cases
HINT_TAIL_POINTS = 30


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _resolve_method(name: str) -> str:
    method = METHOD_ALIASES.get(name, name)
    if method not in CI_METHODS:
        raise ValidationError(
            f"unknown method {name!r}; choose from {', '.join(CI_METHODS)} "
            f"or the codes {', '.join(METHOD_ALIASES)}"
        )
    return method


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"expected a comma-separated list of numbers, got {text!r}") from None


# ---------------------------------------------------------------------------
# sweep machinery


def _orient(values, sigma2, left_tail: bool, t=None, p=None):
    sample = make_sample(values, t=t, p=p, side="left" if left_tail else "right")
    if sigma2 is None:
        return sample, None
    order = np.argsort(-np.asarray(values) if left_tail else np.asarray(values), kind="stable")
    return sample, np.asarray(sigma2)[order]


def tail_sweep(
    sample,
    sigma2,
    grid,
    method: str,
    alpha: float,
    *,
    q: int = 2,
    r_override: int | None = None,
    k_override: int | None = None,
    scfg: SubsampleConfig | None = None,
    gamma_override: float | None = None,
    sim_draws: int = 100_000,
    n_bootstrap: int = 1000,
    bandwidth: float | None = None,
    left_tail: bool = False,
    transform=None,
) -> list[dict]:
    """One confidence-interval row per grid point.

    ``grid`` holds ("tau", v) or ("l", v) entries on the user's scale;
    left-tail rows are computed on the oriented sample and mapped back to
    the original sign.  Subsampled critical-value tables are shared across
    rows with identical (r, q, l).  Row-level failures land in the row's
    warnings instead of aborting the sweep.
    """
    scfg = scfg or SubsampleConfig()
    n = sample.n
    rows = []
    table_cache: dict = {}

    for kind, value in grid:
        if kind == "tau":
            if not 0.0 < value < 1.0:
                raise ValidationError(f"quantile {value} outside (0, 1)")
            tau_user = value
            # rounding guard so floor(l) lands on the intended rank
            l_val = round(n * value if left_tail else n * (1.0 - value), 9)
        else:
            if value < 0 or value > n:
                raise ValidationError(f"l={value} outside [0, n]")
            l_val = float(value)
            tau_user = l_val / n if left_tail else 1.0 - l_val / n
        oriented_tau = 1.0 - l_val / n

        row = {
            "method": method,
            "target": tau_user,
            "l_or_k": l_val,
            "lower": None,
            "upper": None,
            "estimate": None,
            "warnings": [],
        }
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                lower, upper, estimate = _sweep_cell(
                    sample,
                    sigma2,
                    method,
                    alpha,
                    l_val,
                    oriented_tau,
                    q,
                    r_override,
                    k_override,
                    scfg,
                    gamma_override,
                    sim_draws,
                    n_bootstrap,
                    bandwidth,
                    table_cache,
                    row,
                )
            row["warnings"].extend(str(w.message) for w in caught)
            if left_tail:
                lower, upper = -upper, -lower
                estimate = None if estimate is None else -estimate
            if transform is not None:
                lower = float(transform.invert(lower))
                upper = float(transform.invert(upper))
                estimate = None if estimate is None else float(transform.invert(estimate))
            row.update({"lower": lower, "upper": upper, "estimate": estimate})
        except (ValidationError, InfeasibleError) as exc:
            row["warnings"].append(str(exc))
        rows.append(row)
    return rows


def _sweep_cell(
    sample,
    sigma2,
    method,
    alpha,
    l_val,
    oriented_tau,
    q,
    r_override,
    k_override,
    scfg,
    gamma_override,
    sim_draws,
    n_bootstrap,
    bandwidth,
    table_cache,
    row,
):
    n = sample.n
    if method.startswith("extreme"):
        if r_override is not None:
            r = r_override
        elif method == "extreme-max":
            r = 0
        else:
            r = int(np.floor(l_val))
        rcfg = RatioConfig(r=r, q=q, l=l_val)
        if l_val == 0:
            row["warnings"].append(
                "endpoint target (l=0) assumes a finite endpoint (negative tail index)"
            )
        key = (method, rcfg.r, rcfg.q, rcfg.l)
        if key not in table_cache:
            if method == "extreme-simulated":
                gamma = gamma_override
                if gamma is None:
                    gamma = pwm_estimator(sample).gamma_hat
                    row["warnings"].append(f"tail index estimated by pwm: {gamma:.4f}")
                spec = LimitLawSpec(gamma=gamma, r=rcfg.r, q=rcfg.q, l=rcfg.l)
                table_cache[key] = sample_limit_ratio(spec, n_draws=sim_draws, seed=scfg.seed)
            else:
                table_cache[key] = subsample_critical_values(sample, rcfg, scfg)
        table = table_cache[key]
        target = TailTarget(l=l_val)
        ci = extreme_ci(sample, target, alpha, rcfg, table)
        estimate = median_unbiased_estimator(sample, target, rcfg, table)
        row["warnings"].extend(ci.diagnostics)
        return ci.lower, ci.upper, estimate

    if method.startswith("intermediate"):
        k = k_override if k_override is not None else max(1, int(np.floor(l_val + 0.5)))
        cfg = IntermediateConfig(k=k)
        row["l_or_k"] = float(k)
        if method == "intermediate-subsampled":
            ci = intermediate_ci_subsampled(sample, cfg, alpha, scfg)
        else:
            ci = intermediate_ci_normal(sample, cfg, alpha)
        row["warnings"].extend(ci.diagnostics)
        return ci.lower, ci.upper, top_order_statistic(sample, k)

    if method == "central-binomial":
        ci = binomial_ci(sample, oriented_tau, alpha)
        row["warnings"].extend(ci.diagnostics)
        return ci.lower, ci.upper, empirical_quantile(sample, oriented_tau)

    if method == "central-corrected":
        ccfg = CentralConfig(
            tau=oriented_tau, sigma2=sigma2, n_bootstrap=n_bootstrap, bandwidth=bandwidth
        )
        ci = corrected_quantile_bootstrap_ci(sample, ccfg, alpha, seed=scfg.seed)
        row["warnings"].extend(ci.diagnostics)
        return ci.lower, ci.upper, corrected_quantile(sample, ccfg)

    raise ValidationError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# shared ingestion and report plumbing


def _load_inputs(args):
    """Ingest, optionally standardize, and orient the input data."""
    if args.mode == "estimates":
        values, _, diagnostics = read_estimates_csv(args.input)
        sigma2, t, p = None, None, None
    else:
        panel, diagnostics = read_panel_csv(args.input)
        first = unitwise_ols(panel)
        diagnostics["dropped_rank_deficient"] = first.dropped_units
        values = first.sample.values
        sigma2 = first.sigma2
        t, p = first.sample.t, first.sample.p

    transform = None
    if getattr(args, "standardize", False):
        base = make_sample(values, t=t, p=p)
        std_sample, transform = standardize(base)
        values = std_sample.values
        if sigma2 is not None:
            sigma2 = sigma2 / transform.scale ** 2
        diagnostics["standardized"] = {"mean": transform.mean, "scale": transform.scale}

    left = getattr(args, "left_tail", False)
    sample, sigma2 = _orient(values, sigma2, left, t=t, p=p)
    return sample, sigma2, transform, diagnostics


def _print_method_hints(sample, rows, method):
    for row in rows:
        l_val = row.get("l_or_k")
        if l_val is None:
            continue
        extreme_suits = l_val < HINT_TAIL_POINTS
        chosen_extreme = not method.startswith("central")
        if extreme_suits != chosen_extreme:
            better = "extreme/intermediate" if extreme_suits else "central"
            print(
                f"hint: target {row['target']:g} leaves ~{l_val:.0f} observations beyond "
                f"the target rank; {better}-order methods are the usual choice (not enforced)",
                file=sys.stderr,
            )


def _report(args, command: str, rows, extra_meta=None) -> dict:
    # threads is a worker cap that never affects results, so it stays out of
    # the embedded configuration and outputs are identical across thread counts
    config = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "config", "threads") and not k.startswith("_")
    }
    meta = {
        "version": __version__,
        "command": command,
        "seed": args.seed,
        "kernel_backend": _kernels.BACKEND,
        "config": config,
    }
    if extra_meta:
        meta.update(extra_meta)
    return {"meta": meta, "rows": rows}


def _emit(args, payload) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _resolve_seed(args) -> None:
    if args.seed is None:
        env = os.environ.get(SEED_ENV_VAR)
        if env is not None:
            try:
                args.seed = int(env)
            except ValueError:
                raise ValidationError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
        else:
            args.seed = 0


# ---------------------------------------------------------------------------
# command handlers


def _grid_from_args(args) -> list[tuple[str, float]]:
    grid: list[tuple[str, float]] = []
    if getattr(args, "quantile", None):
        grid.extend(("tau", v) for v in args.quantile)
    if getattr(args, "l", None):
        grid.extend(("l", v) for v in args.l)
    if not grid:
        raise ValidationError("provide at least one target via --quantile or --l")
    return grid


def _sweep_from_args(args, sample, sigma2, transform):
    method = _resolve_method(args.method)
    scfg = SubsampleConfig(m=args.b_exponent, n_subsamples=args.subsamples, seed=args.seed)
    rows = tail_sweep(
        sample,
        sigma2,
        _grid_from_args(args),
        method,
        args.alpha,
        q=args.q,
        r_override=args.r,
        k_override=args.k,
        scfg=scfg,
        gamma_override=args.gamma,
        sim_draws=args.sim_draws,
        n_bootstrap=args.bootstrap,
        bandwidth=args.bandwidth,
        left_tail=args.left_tail,
        transform=transform,
    )
    _print_method_hints(sample, rows, method)
    return rows


def _cmd_ci(args) -> int:
    sample, sigma2, transform, diagnostics = _load_inputs(args)
    rows = _sweep_from_args(args, sample, sigma2, transform)
    _emit(args, _report(args, "ci", rows, {"input_diagnostics": diagnostics}))
    if all(row["lower"] is None for row in rows):
        print("infeasible: no target could be computed; see row warnings", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_estimate(args) -> int:
    sample, sigma2, transform, diagnostics = _load_inputs(args)
    if args.method in ("median-unbiased", "mu"):
        args.method = "extreme-mixed" if args.r is None or args.r > 0 else "extreme-max"
    rows = _sweep_from_args(args, sample, sigma2, transform)
    for row in rows:
        row.pop("lower", None)
        row.pop("upper", None)
    _emit(args, _report(args, "estimate", rows, {"input_diagnostics": diagnostics}))
    if all(row["estimate"] is None for row in rows):
        print("infeasible: no target could be computed; see row warnings", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_gamma(args) -> int:
    sample, _, _, diagnostics = _load_inputs(args)
    k = args.k if args.k is not None else default_tail_count(sample.n)
    rows = []
    for name, fn in (("hill", hill_estimator), ("pwm", pwm_estimator), ("average", averaged_gamma)):
        row = {"method": name, "k": k, "estimate": None, "warnings": []}
        try:
            est = fn(sample, k)
            row["estimate"] = est.gamma_hat
            if est.note:
                row["warnings"].append(est.note)
        except (ValidationError, InfeasibleError) as exc:
            row["warnings"].append(str(exc))
        rows.append(row)
    _emit(args, _report(args, "gamma", rows, {"input_diagnostics": diagnostics}))
    return EXIT_OK


def _cmd_test_support(args) -> int:
    if not args.assume_finite_endpoint:
        raise ValidationError(
            "the support test is valid only for a finite upper endpoint (negative tail "
            "index); pass --assume-finite-endpoint to assert this"
        )
    sample, _, transform, diagnostics = _load_inputs(args)
    c_value = args.c_value
    if args.left_tail:
        # H0: lower endpoint >= c  <->  oriented endpoint <= -c
        c_value = -c_value
    if transform is not None:
        c_value = float(transform.apply(c_value))
    scfg = SubsampleConfig(m=args.b_exponent, n_subsamples=args.subsamples, seed=args.seed)
    rcfg = RatioConfig(r=0, q=args.q, l=0.0)
    table = subsample_critical_values(sample, rcfg, scfg)
    result = support_test(sample, c_value, args.q, args.alpha, table)
    rows = [
        {
            "method": "support-test",
            "c_value": args.c_value,
            "statistic": result.statistic,
            "critical_value": result.critical_value,
            "decision": result.decision,
            "alpha": result.alpha,
            "warnings": result.diagnostics,
        }
    ]
    _emit(args, _report(args, "test-support", rows, {"input_diagnostics": diagnostics}))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    cfg = DGPConfig(
        n=args.n,
        t=args.t,
        kappa=args.kappa,
        beta=args.beta,
        rho=args.rho,
        sigma_x=args.sigma_x,
        seed=args.seed,
        noiseless=args.noiseless,
    )
    if args.emit_estimates or args.emit_panel:
        panel = generate_panel(cfg)
        if args.emit_panel:
            write_panel_csv(args.emit_panel, panel)
        if args.emit_estimates:
            first = unitwise_ols(panel)
            write_estimates_csv(args.emit_estimates, first.sample.values)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    knobs = HarnessKnobs(
        q=args.q,
        subsample_m=args.b_exponent,
        n_subsamples=args.subsamples,
        n_bootstrap=args.bootstrap,
        sim_draws=args.sim_draws,
        level=1.0 - args.alpha,
    )
    report = run_coverage_experiment(
        cfg,
        methods,
        args.taus,
        n_reps=args.reps,
        level=1.0 - args.alpha,
        seed=args.seed,
        threads=args.threads,
        knobs=knobs,
    )
    if args.output and args.output.endswith(".csv"):
        report.to_csv(args.output)
    elif args.output:
        report.to_json(args.output)
    else:
        print(report.to_json())
    return EXIT_OK


def _cmd_diagnose(args) -> int:
    noise = "normal" if args.noise_normal else args.noise_moments
    if noise is None:
        raise ValidationError("specify the noise tail via --noise-moments or --noise-normal")
    diag = rate_diagnostic(
        n=args.n,
        t=args.t,
        p=args.p,
        noise=noise,
        gamma_prime=args.gamma_prime,
        regime=args.regime,
        delta=args.delta,
    )
    rows = [
        {
            "method": f"rate-{args.regime}",
            "value": diag.value,
            "flag": diag.flag,
            "noise": diag.noise,
            "warnings": ["asymptotic rate magnitudes are advisory only"],
        }
    ]
    _emit(args, _report(args, "diagnose", rows))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly


def _add_io_flags(p, needs_input=True):
    if needs_input:
        p.add_argument("--input", required=True, help="input CSV path")
        p.add_argument(
            "--mode",
            choices=("estimates", "panel"),
            default="estimates",
            help="input schema: one estimate per row, or a long-format panel",
        )
        p.add_argument("--left-tail", action="store_true", help="analyze the left tail")
        p.add_argument(
            "--standardize",
            action="store_true",
            help="center and scale to unit population variance before inference",
        )
    p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV_VAR} or 0)")
    p.add_argument("--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--config", default=None, help="INI-style key=value defaults; flags override")
    p.add_argument("--threads", type=int, default=1, help="worker cap; never changes results")


def _add_method_flags(p):
    p.add_argument("--quantile", type=_float_list, default=None, help="target quantile(s), comma-separated")
    p.add_argument("--l", type=_float_list, default=None, help="tail offset(s) l; targets 1 - l/n")
    p.add_argument("--alpha", type=float, default=0.05, help="error level (CI level is 1 - alpha)")
    p.add_argument("--q", type=int, default=2, help="spread rank of the ratio denominator")
    p.add_argument("--r", type=int, default=None, help="override the numerator rank")
    p.add_argument("--k", type=int, default=None, help="override the intermediate rank")
    p.add_argument("--b-exponent", type=float, default=0.7, help="subsample size exponent m")
    p.add_argument("--subsamples", type=int, default=1000, help="number of random subsamples")
    p.add_argument("--gamma", type=float, default=None, help="tail index for simulated critical values")
    p.add_argument("--sim-draws", type=int, default=100_000, help="draws for simulated critical values")
    p.add_argument("--bootstrap", type=int, default=1000, help="bootstrap resamples for central-corrected")
    p.add_argument("--bandwidth", type=float, default=None, help="kernel bandwidth for central-corrected")


def build_parser() -> _Parser:
    parser = _Parser(prog="tailquant", description=__doc__)
    parser.add_argument("--version", action="version", version=f"tailquant {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ci = sub.add_parser("ci", help="confidence intervals for tail quantiles")
    p_ci.add_argument("--method", required=True, help=f"one of {', '.join(CI_METHODS)} or a menu code")
    _add_method_flags(p_ci)
    _add_io_flags(p_ci)
    p_ci.set_defaults(func=_cmd_ci)

    p_est = sub.add_parser("estimate", help="point estimates for tail quantiles")
    p_est.add_argument(
        "--method",
        default="median-unbiased",
        help="median-unbiased (extreme) or central-corrected; menu codes accepted",
    )
    _add_method_flags(p_est)
    _add_io_flags(p_est)
    p_est.set_defaults(func=_cmd_estimate)

    p_gamma = sub.add_parser("gamma", help="tail-index estimates (hill, pwm, average)")
    p_gamma.add_argument("--k", type=int, default=None, help="tail count (default floor(n^(3/5)))")
    _add_io_flags(p_gamma)
    p_gamma.set_defaults(func=_cmd_gamma)

    p_sup = sub.add_parser("test-support", help="test H0: endpoint <= C against a longer tail")
    p_sup.add_argument("--c-value", type=float, required=True, help="hypothesized endpoint C")
    p_sup.add_argument("--q", type=int, default=2)
    p_sup.add_argument("--alpha", type=float, default=0.05, help="one-sided test size")
    p_sup.add_argument("--b-exponent", type=float, default=0.7)
    p_sup.add_argument("--subsamples", type=int, default=1000)
    p_sup.add_argument(
        "--assume-finite-endpoint",
        action="store_true",
        help="assert that the oriented tail has a finite endpoint (required)",
    )
    _add_io_flags(p_sup)
    p_sup.set_defaults(func=_cmd_test_support)

    p_sim = sub.add_parser("simulate", help="Monte Carlo coverage experiment")
    p_sim.add_argument("--n", type=int, required=True, help="cross-section size")
    p_sim.add_argument("--t", type=int, required=True, help="series length per unit")
    p_sim.add_argument("--kappa", type=float, default=4.0)
    p_sim.add_argument("--beta", type=float, default=8.0)
    p_sim.add_argument("--rho", type=float, default=0.3)
    p_sim.add_argument("--sigma-x", type=float, default=3.0)
    p_sim.add_argument("--noiseless", action="store_true")
    p_sim.add_argument("--methods", default="1a", help="comma-separated menu codes, e.g. 1a,3a,3b")
    p_sim.add_argument("--taus", type=_float_list, required=True, help="target quantiles")
    p_sim.add_argument("--reps", type=int, default=1000)
    p_sim.add_argument("--alpha", type=float, default=0.05)
    p_sim.add_argument("--q", type=int, default=2)
    p_sim.add_argument("--b-exponent", type=float, default=0.7)
    p_sim.add_argument("--subsamples", type=int, default=1000)
    p_sim.add_argument("--bootstrap", type=int, default=1000)
    p_sim.add_argument("--sim-draws", type=int, default=100_000)
    p_sim.add_argument("--emit-estimates", default=None, help="write one panel's estimates CSV here")
    p_sim.add_argument("--emit-panel", default=None, help="write one generated panel CSV here")
    _add_io_flags(p_sim, needs_input=False)
    p_sim.set_defaults(func=_cmd_simulate)

    p_diag = sub.add_parser("diagnose", help="finite-sample rate-condition magnitudes")
    p_diag.add_argument("--n", type=int, required=True)
    p_diag.add_argument("--t", type=int, required=True)
    p_diag.add_argument("--p", type=float, default=0.5, help="first-stage convergence exponent")
    p_diag.add_argument("--noise-moments", type=float, default=None, help="finite noise moment order")
    p_diag.add_argument("--noise-normal", action="store_true", help="treat the noise as normal")
    p_diag.add_argument("--gamma-prime", type=float, default=0.0, help="lower bound for the tail index")
    p_diag.add_argument("--regime", choices=("extreme", "intermediate"), default="extreme")
    p_diag.add_argument("--delta", type=float, default=None, help="rank exponent for the intermediate regime")
    _add_io_flags(p_diag, needs_input=False)
    p_diag.set_defaults(func=_cmd_diagnose)

    return parser


def _inject_config_defaults(argv: list[str]) -> list[str]:
    """Expand --config FILE into pseudo-flags placed before the user's flags."""
    if "--config" not in argv:
        return argv
    pos = argv.index("--config")
    if pos + 1 >= len(argv):
        raise ValidationError("--config needs a file path")
    path = argv[pos + 1]
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config file: {exc}") from None
    pseudo: list[str] = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith(("#", ";", "[")):
            continue
        if "=" not in line:
            raise ValidationError(f"config line is not key=value: {line!r}")
        key, _, value = line.partition("=")
        flag = "--" + key.strip().replace("_", "-")
        value = value.strip()
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                pseudo.append(flag)
        else:
            pseudo.extend([flag, value])
    # insert right after the subcommand so explicit flags (later) win
    return argv[:1] + pseudo + argv[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and not argv[0].startswith("-"):
            argv = _inject_config_defaults(argv)
        parser = build_parser()
        args = parser.parse_args(argv)
        _resolve_seed(args)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
