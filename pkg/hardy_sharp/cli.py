#!/usr/bin/env python3
# Copyright 2026 Hardy Sharp contributors licensed under Apache License, Version 2.0
#
# See file LICENSE for full license details.
import argparse
import logging
import math
import sys

from enum import IntEnum
from typing import Any, Final, Optional, Sequence, get_args

from pydantic import ValidationError

from hardy_sharp.constants import f_bound, make_exponent, sharp_constants
from hardy_sharp.experiments import epsilon_sweep, maximize_restarts, sample_ratios
from hardy_sharp.helpers import (
    ExponentException,
    QuadratureException,
    SettingsException,
    UsageError,
    convert_to_float_list,
    get_default_value_from_env,
)
from hardy_sharp.models import Command, ReportDocument, ReportSummary, RunConfig, SampleSpec
from hardy_sharp.report import write_report
from hardy_sharp.schur import convexity_rows, default_grid, endpoint_values, run_proof
from hardy_sharp.selftest import run_selftest
from hardy_sharp.settings import RunSettingsFile

_LOGGER: Final = logging.getLogger(__name__)

COMMANDS: Final = get_args(Command)
OPTIMIZER_LIMIT: Final = 1e-6

Row = dict[str, float | int | str | bool | None]


class ExitCode(IntEnum):
    OK = 0
    CHECK_FAILED = 1
    NUMERICAL_FAILURE = 2
    USAGE_ERROR = 3


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


class _Outcome:
    """Rows of one pipeline plus the figures of its summary"""

    def __init__(self, columns: list[str]):
        self.columns = columns
        self.rows: list[Row] = []
        self.passed = True
        self.worst_margin: Optional[float] = None
        self.numerical_failures = 0

    def margin(self, value: Optional[float]) -> None:
        if value is not None:
            self.worst_margin = value if self.worst_margin is None else min(self.worst_margin, value)

    def document(self, config: RunConfig) -> ReportDocument:
        summary = ReportSummary(passed=self.passed, worst_margin=self.worst_margin, numerical_failures=self.numerical_failures)
        return ReportDocument(config=config, columns=self.columns, rows=self.rows, summary=summary)


def _constants(config: RunConfig) -> _Outcome:
    outcome = _Outcome(["p", "kp", "cp", "bp"])
    for p in config.p_grid:
        constants = sharp_constants(make_exponent(p))
        outcome.rows.append(dict(p=p, kp=constants.kp, cp=constants.cp, bp=constants.bp))
    return outcome


def _schur(config: RunConfig) -> _Outcome:
    outcome = _Outcome(["p", "theta", "lhs", "rhs", "margin", "err"])
    for p in config.p_grid:
        report = run_proof(default_grid(make_exponent(p), config.theta_points, config.tol, config.slack))
        for row in report.rows:
            outcome.rows.append(dict(p=p, theta=row.theta, lhs=row.lhs, rhs=row.rhs, margin=row.margin, err=row.error_estimate))
        outcome.passed &= report.passed
        outcome.margin(report.worst_margin)
        outcome.numerical_failures += report.numerical_failures
    return outcome


def _convexity(config: RunConfig) -> _Outcome:
    outcome = _Outcome(["p", "theta", "f2_phi", "f2_fd", "rel_diff"])
    for p in config.p_grid:
        e = make_exponent(p)
        band = [t for t in default_grid(e, config.theta_points, stress=False).thetas if 0.01 <= t <= math.pi - 0.01]
        for row in convexity_rows(e, band, config.tol):
            outcome.rows.append(
                dict(p=p, theta=row.theta, f2_phi=row.f2_phi, f2_fd=row.f2_fd, rel_diff=row.rel_diff, err=row.error_estimate)
            )
            outcome.passed &= row.f2_phi > 0.0
            outcome.margin(row.f2_phi)
    return outcome


def _endpoints(config: RunConfig) -> _Outcome:
    outcome = _Outcome(["p", "f0", "fpi", "bp", "residual0", "residualpi"])
    for p in config.p_grid:
        e = make_exponent(p)
        bound = f_bound(e)
        at_zero, at_pi = endpoint_values(e, config.tol)
        residual0, residualpi = at_zero.value - bound, at_pi.value - bound
        err = max(at_zero.error_estimate, at_pi.error_estimate)
        outcome.rows.append(
            dict(p=p, f0=at_zero.value, fpi=at_pi.value, bp=bound, residual0=residual0, residualpi=residualpi, err=err)
        )
        outcome.passed &= max(abs(residual0), abs(residualpi)) <= config.slack
        outcome.margin(config.slack - max(abs(residual0), abs(residualpi)))
    return outcome


def _ratio_sweep(config: RunConfig) -> _Outcome:
    outcome = _Outcome(["p", "sample", "lhs", "rhs_raw", "normalized"])
    spec = SampleSpec(degree=config.degree, count=config.samples, seed=config.seed, decay=config.decay)
    for p in config.p_grid:
        for sample in sample_ratios(make_exponent(p), spec, config.tol, config.angle):
            if sample.result is None:
                outcome.numerical_failures += 1
                outcome.rows.append(dict(p=p, sample=sample.index))
                continue
            result = sample.result
            outcome.rows.append(
                dict(
                    p=p,
                    sample=sample.index,
                    lhs=result.lhs,
                    rhs_raw=result.rhs_raw,
                    normalized=result.normalized,
                    err=result.normalized_error,
                )
            )
            outcome.passed &= result.normalized <= 1.0 + config.slack
            outcome.margin(1.0 - result.normalized)
    return outcome


def _epsilon_sweep(config: RunConfig) -> _Outcome:
    outcome = _Outcome(["p", "eps", "normalized"])
    eps_values = sorted(config.epsilons, reverse=True)
    for p in config.p_grid:
        e = make_exponent(p)
        admissible = [eps for eps in eps_values if 0.0 < eps < e.inv_p]
        if len(admissible) < len(eps_values):
            _LOGGER.warning("Skipping eps values outside (0, 1/p) for %s.", e)

        values = []
        for eps, result in zip(admissible, epsilon_sweep(e, admissible, config.tol)):
            outcome.rows.append(dict(p=p, eps=eps, normalized=result.normalized, err=result.normalized_error))
            values.append(result.normalized)
            outcome.margin(1.0 - result.normalized)
        outcome.passed &= all(left < right for left, right in zip(values, values[1:]))
        outcome.passed &= all(value <= 1.0 + config.slack for value in values)
    return outcome


def _maximize(config: RunConfig) -> _Outcome:
    outcome = _Outcome(["p", "seed", "evaluations", "best_normalized"])
    seeds = range(config.seed, config.seed + config.restarts)
    for p in config.p_grid:
        for result in maximize_restarts(make_exponent(p), config.degree, config.budget, seeds, config.tol):
            normalized = result.best.normalized
            outcome.rows.append(
                dict(p=p, seed=result.seed, evaluations=result.evaluations, best_normalized=normalized, err=result.best.normalized_error)
            )
            outcome.passed &= normalized <= 1.0 + OPTIMIZER_LIMIT
            outcome.margin(1.0 - normalized)
    return outcome


def _selftest(config: RunConfig) -> _Outcome:
    outcome = _Outcome(["check", "passed", "worst"])
    for check in run_selftest(config):
        outcome.rows.append(dict(check=check.check, passed=check.passed, worst=check.worst))
        outcome.passed &= check.passed
        outcome.numerical_failures += int(check.failure is not None)
    return outcome


PIPELINES: Final = {
    "constants": _constants,
    "schur": _schur,
    "convexity": _convexity,
    "endpoints": _endpoints,
    "ratio-sweep": _ratio_sweep,
    "epsilon-sweep": _epsilon_sweep,
    "maximize": _maximize,
    "selftest": _selftest,
}


def run(config: RunConfig) -> int:
    """Run the configured pipeline, write its report and return the exit code"""
    _LOGGER.info("Running %s on p in %s.", config.command, config.p_grid)
    try:
        outcome = PIPELINES[config.command](config)
    except QuadratureException as error:
        _LOGGER.error("Numerical failure: %s", error)
        return ExitCode.NUMERICAL_FAILURE

    write_report(outcome.document(config), config.format, config.output)

    if outcome.numerical_failures:
        _LOGGER.error("%d numerical failures.", outcome.numerical_failures)
        return ExitCode.NUMERICAL_FAILURE
    if not outcome.passed:
        _LOGGER.error("Check failed (worst margin %s).", outcome.worst_margin)
        return ExitCode.CHECK_FAILED

    _LOGGER.info("All checks passed (worst margin %s).", outcome.worst_margin)
    return ExitCode.OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="hardy-sharp", fromfile_prefix_chars="@")
    parser.add_argument("command", choices=COMMANDS, help="Pipeline to run")
    parser.add_argument("--p", type=float, help="Single exponent 1 < p < inf")
    parser.add_argument("--p-grid", type=convert_to_float_list, help='Comma separated exponents: "1.5,2,4"')
    parser.add_argument("--theta-points", type=int, help="Interior angles of the proof grid")
    parser.add_argument("--tol", type=float, help="Absolute quadrature tolerance")
    parser.add_argument("--slack", type=float, help="Allowed violation of every inequality check")
    parser.add_argument("--samples", type=int, help="Random functions per exponent")
    parser.add_argument("--degree", type=int, help="Degree of the trigonometric polynomials")
    parser.add_argument("--seed", type=int, help="Seed of the random family and of the optimizer")
    parser.add_argument("--budget", type=int, help="Objective evaluations per optimizer run")
    parser.add_argument("--restarts", type=int, help="Optimizer runs per exponent, seeds seed, seed+1, ...")
    parser.add_argument("--decay", type=float, help="Coefficient scale (1 + n)^-decay of the random family")
    parser.add_argument("--epsilons", type=convert_to_float_list, help="Comma separated eps values of the sharpness sweep")
    parser.add_argument("--angle", type=float, help="Rotation s of the diameter")
    parser.add_argument("--format", choices=["csv", "json"], help="Report format")
    parser.add_argument("--output", type=str, help="Report path, standard output when omitted")
    parser.add_argument(
        "--config",
        default=get_default_value_from_env("HARDY_SHARP_CONFIG"),
        type=str,
        help='The path to a .yml run configuration: "configs/sweep.yml"',
    )
    parser.add_argument(
        "--loglevel",
        default=get_default_value_from_env("HARDY_SHARP_LOG_LEVEL", "INFO"),
        type=str,
        help=f'Log level, choose one of {", ".join(logging._nameToLevel.keys())} ',
    )
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the settings file, then the flags given on the command line"""
    values: dict[str, Any] = {}
    if args.config is not None:
        values.update(RunSettingsFile(args.config).overrides())

    if args.p is not None and args.p_grid is not None:
        raise UsageError("Give either --p or --p-grid, not both.")
    flags = vars(args).copy()
    if args.p is not None:
        flags["p_grid"] = [args.p]
    for name, value in flags.items():
        if name in RunConfig.model_fields and value is not None:
            values[name] = value

    try:
        return RunConfig(**values)
    except ValidationError as error:
        raise UsageError(f"Invalid run configuration: {error.errors()[0]['msg']}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Command line entry point
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as error:
        print(f"hardy-sharp: error: {error}", file=sys.stderr)
        return ExitCode.USAGE_ERROR

    if args.loglevel not in logging._nameToLevel:
        print(f"hardy-sharp: error: unknown log level {args.loglevel}", file=sys.stderr)
        return ExitCode.USAGE_ERROR

    logging.basicConfig(
        format="%(levelname)s %(asctime)s %(message)s",
        level=logging._nameToLevel[args.loglevel] or logging.INFO,
    )

    try:
        return run(make_config(args))
    except (UsageError, SettingsException, ExponentException) as error:
        _LOGGER.error("%s", error)
        return ExitCode.USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
