"""
Command-line surface: fit, lrtest, residuals, envelope, simulate, power.
Results go to files and stdout, progress to stderr. Any failure ends with
one JSON line on stderr and the exit status of the error.
"""

import argparse
import sys
from dataclasses import replace
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from cli.artifact import ModelArtifact, load_artifact, save_artifact
from cli.data import Dataset, load_dataset, preprocess_zeros
from cli.outputs import atomic_path, dumps, write_table
from config import config
from console import status
from envelope import detect_misspecification, render_envelope_plot, simulated_envelope
from errors import CompassError, DataError, SingularInformationError, UsageError
from regression import INTERCEPT, ModelSpec, coefficient_table, fit_mle, lr_test, standard_errors
from residuals import BootstrapConfig, ResidualKind, class_residual, compute_residuals
from simstudy import (
    DESK_B,
    DESK_REPLICATES,
    FULL_B,
    FULL_REPLICATES,
    load_mixture_config,
    run_power_study,
    run_scenario_study,
    scenario_config,
    scenario_ids,
    scenario_summary_frame,
)


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(message)


def _names(text: Optional[str]) -> List[str]:
    if not text:
        return []
    return [part.strip() for part in text.split(",") if part.strip()]


def _load_data(path: str, components: Sequence[str], args) -> Dataset:
    return preprocess_zeros(load_dataset(path, components), args.epsilon, args.max_zero_fraction)


def _load_model_and_data(args):
    artifact = load_artifact(args.model)
    dataset = _load_data(args.data, artifact.spec.component_names, args)
    if artifact.data_sha256 and artifact.data_sha256 != dataset.sha256:
        status("CLI", f"warning: {args.data} differs from the data the model was fitted to")
    data = dataset.to_regression_data()
    if data.n != artifact.n:
        raise DataError(f"model was fitted to {artifact.n} rows, {args.data} has {data.n}")
    return artifact, data


def _bootstrap_config(args) -> BootstrapConfig:
    return BootstrapConfig(B=args.B, seed=args.seed, threads=args.threads,
                           max_retries_per_replicate=args.max_retries)


def _per_component_means(spec: ModelSpec, overrides: Sequence[str]) -> ModelSpec:
    """Replace the mean covariates of the components named in NAME=COV1,COV2 overrides."""
    mean = {j: cols for j, cols in zip(spec.non_reference, spec.mean_covariates)}
    for item in overrides:
        name, sep, covs = item.partition("=")
        name = name.strip()
        if not sep or name not in spec.component_names:
            raise UsageError(f"--mean-cov-for expects COMPONENT=COV1,COV2 with a known component, got {item!r}")
        j = spec.component_names.index(name)
        if j == spec.reference_component:
            raise UsageError(f"{name!r} is the reference component and has no mean submodel")
        mean[j] = (INTERCEPT,) + tuple(_names(covs))
    return replace(spec, mean_covariates=tuple(mean[j] for j in spec.non_reference))


def cmd_fit(args) -> int:
    components = _names(args.components)
    dataset = _load_data(args.data, components, args)
    if args.reference and args.reference not in components:
        raise UsageError(f"reference {args.reference!r} is not one of the components")
    reference = components.index(args.reference) if args.reference else 0
    spec = ModelSpec.uniform(len(components), _names(args.mean_cov), _names(args.prec_cov),
                             reference_component=reference, component_names=components)
    if args.mean_cov_for:
        spec = _per_component_means(spec, args.mean_cov_for)
    data = dataset.to_regression_data()

    status("Fit", f"{spec.n_params} coefficients, n={data.n}")
    fit = fit_mle(spec, data)
    if not fit.converged:
        status("Fit", f"warning: gradient tolerance not reached after {fit.iterations} iterations")
    try:
        ses = standard_errors(fit, data) if fit.converged else None
    except SingularInformationError as exc:
        status("Fit", f"warning: {exc}")
        ses = None
    if ses is not None:
        fit = replace(fit, std_errors=ses)

    if args.out:
        save_artifact(ModelArtifact.from_fit(fit, args.data, dataset.sha256), args.out)
        status("Fit", f"model written to {args.out}")

    table = pd.DataFrame(coefficient_table(fit)).rename(columns={
        "submodel": "Submodel",
        "covariate": "Covariate",
        "estimate": "Estimate",
        "std_error": "Std. Error",
        "exp_estimate": "Exp(estim)",
    })
    print(f"log-likelihood: {fit.loglik:.6f}  converged: {fit.converged}  iterations: {fit.iterations}")
    print(table.to_string(index=False, float_format=lambda v: f"{v:.4f}"))
    return 0


def cmd_lrtest(args) -> int:
    full_art = load_artifact(args.full)
    reduced_art = load_artifact(args.reduced)
    dataset = _load_data(args.data, full_art.spec.component_names, args)
    data = dataset.to_regression_data()
    result = lr_test(full_art.evaluate(data), reduced_art.evaluate(data))
    print(dumps({"statistic": result.statistic, "df": result.df, "p_value": result.p}))
    return 0


def cmd_residuals(args) -> int:
    artifact, data = _load_model_and_data(args)
    fit = artifact.evaluate(data)
    kind = ResidualKind.parse(args.kind)
    cfg = _bootstrap_config(args)
    meta = {"kind": kind.value, "seed": args.seed, "model": args.model, "n": data.n}

    if kind.is_class:
        status("Bootstrap", f"{kind.label}: B={cfg.B}, seed={cfg.seed}")
        result = class_residual(fit, data, kind, cfg)
        frame = pd.DataFrame({
            "observation": np.arange(1, data.n + 1),
            "residual": result.s,
            "a": result.a,
            "l": result.l,
            "u": result.u,
        })
        meta.update({"B": cfg.B, "redraws": result.replicate_failures})
    else:
        values = compute_residuals(fit, data, [kind], cfg)[kind]
        frame = pd.DataFrame({"observation": np.arange(1, data.n + 1), "residual": values})
    write_table(frame, args.out, "residuals", meta)
    status("CLI", f"residuals written to {args.out}")
    return 0


def cmd_envelope(args) -> int:
    artifact, data = _load_model_and_data(args)
    fit = artifact.evaluate(data)
    kind = ResidualKind.parse(args.kind)
    env = simulated_envelope(fit, data, kind, args.R, _bootstrap_config(args), args.b_inner)

    meta = dict(env.metadata, outside_count=env.outside_count, e=env.e)
    verdict = None
    if args.v is not None:
        verdict = detect_misspecification(env, args.v)
        meta.update({"v": verdict.v, "flagged_points": verdict.flagged_points})
    if args.svg:
        with atomic_path(args.svg) as tmp:
            render_envelope_plot(env, tmp)
    if args.csv:
        write_table(env.to_frame(), args.csv, "envelope", meta)

    report = {"kind": kind.value, "outside_count": env.outside_count, "e": env.e}
    if verdict is not None:
        report.update({"v": verdict.v, "flagged_points": verdict.flagged_points, "flagged": verdict.flagged})
    print(dumps(report))
    return 0


def cmd_simulate(args) -> int:
    replicates = args.replicates or (FULL_REPLICATES if args.paper_scale else DESK_REPLICATES)
    B = args.B or (FULL_B if args.paper_scale else DESK_B)
    ids = scenario_ids() if args.scenario == "all" else [args.scenario]
    tables = [
        run_scenario_study(scenario_config(sid, args.n), replicates, B, args.seed, args.threads,
                           max_retries=args.max_retries)
        for sid in ids
    ]
    meta = {"scenarios": list(ids), "n": args.n, "replicates": replicates, "B": B, "seed": args.seed,
            "redraws": sum(t.metadata["redraws"] for t in tables),
            "ad_clamps": sum(t.metadata["ad_clamps"] for t in tables)}
    if args.scenario == "all":
        write_table(scenario_summary_frame(tables), args.out, "scenario-summary", meta)
    else:
        write_table(tables[0].to_frame(), args.out, "summary", meta)
    status("CLI", f"summary written to {args.out}")
    return 0


def cmd_power(args) -> int:
    if (args.v_class is None) != (args.v_composite is None):
        raise UsageError("--v-class and --v-composite must be given together")
    given = args.v_class is not None
    result = run_power_study(
        correct_g=args.g_correct,
        mixture_g=args.g_wrong,
        n=args.n,
        mix=load_mixture_config(args.weight),
        v_estimation=not given,
        seed=args.seed,
        R=args.R,
        B=args.B,
        threads=args.threads,
        v_values=(args.v_class, args.v_composite) if given else None,
        max_retries=args.max_retries,
    )
    write_table(result.histogram_frame(), args.out, "power-histogram", result.metadata)
    print(dumps({"v_class": result.v_class, "v_composite": result.v_composite}))
    return 0


def _common(parser: argparse.ArgumentParser, seed: bool = True, threads: bool = True) -> None:
    if seed:
        parser.add_argument("--seed", type=int, default=config.SEED, help="seed for all randomness")
    if threads:
        parser.add_argument("--threads", type=int, default=config.THREADS, help="worker threads")
    parser.add_argument("--max-retries", type=int, default=config.MAX_RETRIES,
                        help="redraws per replicate after a failed fit")


def _zeros(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--epsilon", type=float, default=config.ZERO_EPSILON, help="zero replacement value")
    parser.add_argument("--max-zero-fraction", type=float, default=config.MAX_ZERO_FRACTION,
                        help="largest tolerated fraction of rows containing zeros")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="compass", description="Dirichlet regression with bootstrap residual diagnostics")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("fit", help="fit a Dirichlet regression model")
    p.add_argument("--data", required=True)
    p.add_argument("--components", required=True, help="comma-separated component columns")
    p.add_argument("--mean-cov", default="", help="comma-separated mean covariates")
    p.add_argument("--mean-cov-for", action="append", default=[], metavar="COMPONENT=COVS",
                   help="mean covariates for one component, overriding --mean-cov (repeatable)")
    p.add_argument("--prec-cov", default="", help="comma-separated precision covariates")
    p.add_argument("--reference", default=None, help="reference component (default: first)")
    p.add_argument("--out", default=None, help="model artifact path")
    _zeros(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("lrtest", help="likelihood-ratio test of nested models")
    p.add_argument("--full", required=True)
    p.add_argument("--reduced", required=True)
    p.add_argument("--data", required=True)
    _zeros(p)
    p.set_defaults(func=cmd_lrtest)

    p = sub.add_parser("residuals", help="compute one residual kind per observation")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--kind", required=True, help="a1|q1|a2|q2|pearson|compq")
    p.add_argument("--B", type=int, default=config.BOOTSTRAP_B)
    p.add_argument("--out", required=True)
    _common(p)
    _zeros(p)
    p.set_defaults(func=cmd_residuals)

    p = sub.add_parser("envelope", help="normal probability plot with simulated envelope")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--kind", required=True)
    p.add_argument("--R", type=int, default=config.ENVELOPE_R)
    p.add_argument("--B", type=int, default=config.BOOTSTRAP_B)
    p.add_argument("--b-inner", type=int, default=None, help="bootstrap size inside each simulation (default: B)")
    p.add_argument("--svg", default=None)
    p.add_argument("--csv", default=None)
    p.add_argument("--v", type=float, default=None, help="detection threshold")
    _common(p)
    _zeros(p)
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("simulate", help="scenario study of the class residuals")
    p.add_argument("--scenario", required=True, help="scenario id (1a..5b) or 'all'")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--B", type=int, default=None)
    p.add_argument("--paper-scale", action="store_true", help=f"{FULL_REPLICATES} replicates, B={FULL_B}")
    p.add_argument("--out", required=True)
    _common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("power", help="misspecification power study")
    p.add_argument("--g-correct", type=int, default=200)
    p.add_argument("--g-wrong", type=int, default=100)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--R", type=int, default=config.ENVELOPE_R)
    p.add_argument("--B", type=int, default=config.ENVELOPE_B_INNER)
    p.add_argument("--weight", type=float, default=None, help="mixing probability of set 1")
    p.add_argument("--v-class", type=float, default=None)
    p.add_argument("--v-composite", type=float, default=None)
    p.add_argument("--out", required=True)
    _common(p)
    p.set_defaults(func=cmd_power)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the process exit status."""
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be at least 1")
        return args.func(args)
    except CompassError as exc:
        _report(exc, exc.exit_code)
        return exc.exit_code
    except OSError as exc:
        _report(exc, DataError.exit_code)
        return DataError.exit_code
    except Exception as exc:
        _report(exc, CompassError.exit_code)
        return CompassError.exit_code


def _report(exc: Exception, code: int) -> None:
    message = " ".join(str(exc).split())
    print(dumps({"error": type(exc).__name__, "exit_code": code, "message": message}), file=sys.stderr)
