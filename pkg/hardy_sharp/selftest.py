"""
    Self test
    =========

    The acceptance battery, run in-process. Every check reports the
    quantity it compares against its threshold; a check whose integrals
    fail is reported as a numerical failure instead of raising.

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import math
import logging

import numpy as np

from typing import Callable, Final

from hardy_sharp.constants import make_exponent, schur_constant, sharp_constant
from hardy_sharp.experiments import (
    epsilon_sweep,
    maximize_restarts,
    quadratic_epsilon_ratio,
    ratio,
    sample_ratios,
)
from hardy_sharp.helpers import QuadratureException
from hardy_sharp.models import CheckOutcome, RunConfig, SampleSpec, VerificationReport
from hardy_sharp.poisson import TrigPolynomial, mean_value_check
from hardy_sharp.schur import convexity_rows, default_grid, endpoint_check, run_proof, symmetry_check

_LOGGER: Final = logging.getLogger(__name__)

SLACK: Final = 1e-8
SPREAD_LIMIT: Final = 1e-7
FD_LIMIT: Final = 1e-3
SYMMETRY_LIMIT: Final = 1e-9
OPTIMIZER_LIMIT: Final = 1e-6
CLOSED_FORM_LIMIT: Final = 1e-10
SPOT_POINTS: Final = 20
RADII: Final = (0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 0.9, -0.9)
SHARPNESS_EXPONENTS: Final = (1.25, 2.0, 4.0)
OPTIMIZER_SEEDS: Final = 10
FALSIFIED_FACTOR: Final = 0.99


class SelfTest:
    def __init__(self, config: RunConfig):
        self.config = config
        self.exponents = [make_exponent(p) for p in config.p_grid]
        self.rng = np.random.default_rng(config.seed)
        self._reports: dict[float, VerificationReport] = {}

    def reports(self) -> list[VerificationReport]:
        """Proof reports on the full grid, shared by several checks"""
        for e in self.exponents:
            if e.p not in self._reports:
                grid = default_grid(e, self.config.theta_points, self.config.tol, self.config.slack)
                self._reports[e.p] = run_proof(grid)
        return [self._reports[e.p] for e in self.exponents]

    def constants(self) -> CheckOutcome:
        two, three_halves = make_exponent(2.0), make_exponent(1.5)
        deviations = [abs(sharp_constant(two) - 1.0), abs(sharp_constant(three_halves) - math.sqrt(2.0))]
        deviations += [abs(schur_constant(e) / (2.0 * math.pi * sharp_constant(e)) - 1.0) for e in self.exponents]
        worst = max(deviations)
        return CheckOutcome(check="constants", passed=worst <= 1e-12, worst=worst)

    def endpoints(self) -> CheckOutcome:
        worst = max(max(abs(r) for r in endpoint_check(e, self.config.tol)) for e in self.exponents)
        return CheckOutcome(check="endpoints", passed=worst <= SLACK, worst=worst)

    def representations(self) -> CheckOutcome:
        rows = [row for report in self.reports() for row in report.rows]
        worst = max(row.spread for row in rows if row.spread is not None)
        failures = sum(report.numerical_failures for report in self.reports())
        return CheckOutcome(check="representations", passed=worst <= SPREAD_LIMIT and failures == 0, worst=worst)

    def convexity(self) -> CheckOutcome:
        smallest = min(row.f_second for report in self.reports() for row in report.rows if row.f_second is not None)

        worst_fd = 0.0
        for _ in range(SPOT_POINTS):
            e = self.exponents[int(self.rng.integers(len(self.exponents)))]
            theta = float(self.rng.uniform(0.2, math.pi - 0.2))
            (row,) = convexity_rows(e, [theta], self.config.tol)
            smallest = min(smallest, row.f2_phi)
            worst_fd = max(worst_fd, row.rel_diff)

        return CheckOutcome(check="convexity", passed=smallest > 0.0 and worst_fd <= FD_LIMIT, worst=worst_fd)

    def schur(self) -> CheckOutcome:
        margins = [row.margin for report in self.reports() for row in report.rows if row.margin is not None]
        worst = min(margins)
        passed = worst >= -SLACK and all(report.passed for report in self.reports())
        return CheckOutcome(check="schur", passed=passed, worst=worst)

    def certificate(self) -> CheckOutcome:
        worst = max(abs(mean_value_check(e, r, self.config.tol)) for e in self.exponents for r in RADII)
        return CheckOutcome(check="certificate", passed=worst <= SLACK, worst=worst)

    def symmetry(self) -> CheckOutcome:
        worst = 0.0
        for _ in range(SPOT_POINTS):
            e = make_exponent(float(self.rng.uniform(1.05, 16.0)))
            theta = float(self.rng.uniform(0.01, math.pi - 0.01))
            worst = max(worst, symmetry_check(e, theta, self.config.tol))
        return CheckOutcome(check="symmetry", passed=worst <= SYMMETRY_LIMIT, worst=worst)

    def random_functions(self) -> CheckOutcome:
        spec = SampleSpec(degree=self.config.degree, count=self.config.samples, seed=self.config.seed, decay=self.config.decay)
        largest = -math.inf
        failures = 0
        for e in self.exponents:
            outcomes = sample_ratios(e, spec, self.config.tol)
            failures += sum(1 for outcome in outcomes if outcome.failure is not None)
            largest = max([largest, *(o.result.normalized for o in outcomes if o.result is not None)])

        two = make_exponent(2.0)
        closed_forms = (
            (TrigPolynomial(1.0), 1.0 / math.pi),
            (TrigPolynomial(0.0, [1.0], [0.0]), 2.0 / (3.0 * math.pi)),
            (TrigPolynomial(0.0, [0.0, 1.0], [0.0, 0.0]), 2.0 / (5.0 * math.pi)),
        )
        deviation = max(abs(ratio(two, f, self.config.tol).normalized - expected) for f, expected in closed_forms)

        passed = largest <= 1.0 + SLACK and deviation <= CLOSED_FORM_LIMIT and failures == 0
        return CheckOutcome(check="random-functions", passed=passed, worst=largest)

    def sharpness(self) -> CheckOutcome:
        passed = True
        largest = -math.inf
        for p in SHARPNESS_EXPONENTS:
            e = make_exponent(p)
            eps_values = sorted((eps for eps in self.config.epsilons if 0.0 < eps < e.inv_p), reverse=True)
            if not eps_values:
                continue
            values = [result.normalized for result in epsilon_sweep(e, eps_values, self.config.tol)]
            largest = max(largest, *values)
            passed &= all(left < right for left, right in zip(values, values[1:]))
            if p == 2.0:
                passed &= all(abs(v - quadratic_epsilon_ratio(eps)) <= SLACK for v, eps in zip(values, eps_values))

        return CheckOutcome(check="sharpness", passed=passed and largest <= 1.0 + SLACK, worst=largest)

    def optimizer(self) -> CheckOutcome:
        seeds = range(self.config.seed, self.config.seed + OPTIMIZER_SEEDS)
        degree = max(self.config.degree, 1)
        largest = max(
            result.best.normalized
            for p in SHARPNESS_EXPONENTS
            for result in maximize_restarts(make_exponent(p), degree, self.config.budget, seeds, self.config.tol)
        )
        return CheckOutcome(check="optimizer", passed=largest <= 1.0 + OPTIMIZER_LIMIT, worst=largest)

    def falsifiability(self) -> CheckOutcome:
        # A reduced C_p has to break the proof for every exponent, whatever the grid.
        reports = [run_proof(default_grid(e, 9, self.config.tol, self.config.slack), FALSIFIED_FACTOR) for e in self.exponents]
        worst = max(report.worst_margin for report in reports if report.worst_margin is not None)
        return CheckOutcome(check="falsifiability", passed=not any(report.passed for report in reports), worst=worst)

    def checks(self) -> list[tuple[str, Callable[[], CheckOutcome]]]:
        return [
            ("constants", self.constants),
            ("endpoints", self.endpoints),
            ("representations", self.representations),
            ("convexity", self.convexity),
            ("schur", self.schur),
            ("certificate", self.certificate),
            ("symmetry", self.symmetry),
            ("random-functions", self.random_functions),
            ("sharpness", self.sharpness),
            ("optimizer", self.optimizer),
            ("falsifiability", self.falsifiability),
        ]

    def run(self) -> list[CheckOutcome]:
        outcomes = []
        for name, check in self.checks():
            _LOGGER.info("Self test: %s.", name)
            try:
                outcome = check()
            except QuadratureException as error:
                _LOGGER.warning("Self test %s failed numerically: %s", name, error)
                outcome = CheckOutcome(check=name, passed=False, failure=str(error))

            if not outcome.passed:
                _LOGGER.info("Self test %s FAILED (worst %s).", name, outcome.worst)
            outcomes.append(outcome)
        return outcomes


def run_selftest(config: RunConfig) -> list[CheckOutcome]:
    return SelfTest(config).run()

