"""
    Experiments
    ===========

    Empirical checks of the sharp inequality

        int_{-1}^{1} |f(r e^{is})|^p dr <= K_p int_0^{2pi} |f*(theta)|^p d(theta)

    on random trigonometric polynomials, on the near-extremal family
    Re(1 - z^2)^{eps - 1/p}, and by direct maximization of the normalized
    ratio over polynomials of fixed degree.

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import math
import logging

import numpy as np

from concurrent.futures import ThreadPoolExecutor
from scipy.optimize import brentq
from typing import Callable, Final, Iterable, Optional

from hardy_sharp.constants import beta, sharp_constant
from hardy_sharp.helpers import ExponentException, NonConvergence, QuadratureException, ZeroFunction, worker_count
from hardy_sharp.models import Exponent, OptimizationResult, RatioResult, SampleOutcome, SampleSpec
from hardy_sharp.poisson import TWO_PI, BoundaryFunction, TrigPolynomial, re_power_boundary
from hardy_sharp.quadrature import DEFAULT_TOL, QuadratureResult, SingularityHint, integrate, integrate_weighted

_LOGGER: Final = logging.getLogger(__name__)

SCAN_POINTS: Final = 4096
SIMPLEX_STEP: Final = 0.1
# Nelder-Mead coefficients: reflection, expansion, contraction, shrink.
REFLECT: Final = 1.0
EXPAND: Final = 2.0
CONTRACT: Final = 0.5
SHRINK: Final = 0.5
VALUE_SPREAD: Final = 1e-12
SIMPLEX_DIAMETER: Final = 1e-9


def random_harmonic(spec: SampleSpec, index: int) -> TrigPolynomial:
    """Sample ``index`` of the family: standard normal coefficients scaled by (1 + n)^-decay"""
    if not 0 <= index < spec.count:
        raise ExponentException(f"Sample index must lie in [0, {spec.count}), got {index}.")

    # Seeding with the pair makes every sample reproducible on its own.
    rng = np.random.default_rng([spec.seed, index])
    scale = (1.0 + np.arange(1, spec.degree + 1)) ** (-spec.decay)
    a0 = rng.standard_normal()
    cos_coeffs = rng.standard_normal(spec.degree) * scale
    sin_coeffs = rng.standard_normal(spec.degree) * scale
    return TrigPolynomial(a0, cos_coeffs, sin_coeffs)


def find_zeros(fun: Callable[[np.ndarray], np.ndarray], a: float, b: float, points: int = SCAN_POINTS) -> list[float]:
    """Zeros of fun strictly inside (a, b): sign scan on a uniform grid, refined by brentq"""
    x = np.linspace(a, b, points + 1)
    values = np.asarray(fun(x), dtype=float)

    zeros = {float(x[i]) for i in np.flatnonzero(values[1:-1] == 0.0) + 1}
    for i in np.flatnonzero(values[:-1] * values[1:] < 0.0):
        zeros.add(float(brentq(lambda t: float(fun(np.asarray(t))), x[i], x[i + 1], xtol=1e-15)))

    return sorted(zero for zero in zeros if a < zero < b)


def _power_integral(fun: Callable[[np.ndarray], np.ndarray], a: float, b: float, p: float, tol: float) -> QuadratureResult:
    # |f|^p is only C^1 at a simple zero when p < 2; the zeros become split points.
    hints = [SingularityHint(zero, p) for zero in find_zeros(fun, a, b)]

    def integrand(x: np.ndarray) -> np.ndarray:
        return np.abs(fun(x)) ** p

    return integrate(integrand, a, b, tol, hints)


def _ratio_result(e: Exponent, lhs: QuadratureResult, rhs: QuadratureResult) -> RatioResult:
    ratio = lhs.value / rhs.value
    return RatioResult(
        lhs=lhs.value,
        rhs_raw=rhs.value,
        ratio=ratio,
        normalized=ratio / sharp_constant(e),
        lhs_error=lhs.error_estimate,
        rhs_error=rhs.error_estimate,
    )


def ratio(e: Exponent, f: TrigPolynomial, tol: float = DEFAULT_TOL, angle: float = 0.0) -> RatioResult:
    """
    Both sides of the inequality for f along the diameter at angle s.

    The integrals are computed for f / |f| (coefficient norm) and scaled
    back by |f|^p, so the ratio is invariant under scaling of f.
    """
    if f.is_zero():
        raise ZeroFunction("The ratio is undefined for the zero function.")

    norm = f.norm
    unit = f.scaled(1.0 / norm).rotated(angle)
    lhs = _power_integral(unit.on_segment, -1.0, 1.0, e.p, tol)
    rhs = _power_integral(unit.boundary, 0.0, TWO_PI, e.p, tol)

    weight = norm**e.p
    return _ratio_result(e, lhs.scaled(weight), rhs.scaled(weight))


def sample_ratios(e: Exponent, spec: SampleSpec, tol: float = DEFAULT_TOL, angle: float = 0.0) -> list[SampleOutcome]:
    """Ratio of every sample of the family; a sample whose integral fails is reported, not raised"""

    def outcome(index: int) -> SampleOutcome:
        try:
            return SampleOutcome(index=index, result=ratio(e, random_harmonic(spec, index), tol, angle))
        except QuadratureException as error:
            _LOGGER.warning("Sample %d for %s failed: %s", index, e, error)
            return SampleOutcome(index=index, failure=str(error))

    with ThreadPoolExecutor(max_workers=worker_count()) as executor:
        outcomes = list(executor.map(outcome, range(spec.count)))

    worst = max((o.result.normalized for o in outcomes if o.result is not None), default=None)
    _LOGGER.info("Sampled %d functions for %s, largest normalized ratio %s.", spec.count, e, worst)
    return outcomes


def _check_epsilon(e: Exponent, eps: float) -> None:
    if not 0.0 < eps < e.inv_p:
        raise ExponentException(f"Need 0 < eps < 1/p = {e.inv_p:g}, got eps={eps}.")


def epsilon_boundary(e: Exponent, eps: float) -> BoundaryFunction:
    """Boundary data of f_eps = Re(1 - z^2)^(eps - 1/p)"""
    _check_epsilon(e, eps)
    return re_power_boundary(e.inv_p - eps, name=f"f_eps[{e}, eps={eps:g}]")


def epsilon_ratio(e: Exponent, eps: float, tol: float = DEFAULT_TOL) -> RatioResult:
    """
    Ratio for the near-extremal function f_eps.

    With alpha = p eps - 1 both sides carry the algebraic weight alpha at
    their singular points:

        lhs = int_{-1}^{1} (1 - r^2)^alpha dr
        rhs = 4 int_0^{pi/2} (2 sin theta)^alpha cos^p((1/p - eps)(pi/2 - theta)) d(theta)

    using that |f_eps*|^p is pi-periodic and even about pi/2.
    """
    _check_epsilon(e, eps)
    alpha = e.p * eps - 1.0
    q = e.inv_p - eps

    def constant(r: np.ndarray) -> np.ndarray:
        return np.ones_like(r)

    def smooth_boundary(theta: np.ndarray) -> np.ndarray:
        # (2 sin theta)^alpha = theta^alpha (2 sin(theta) / theta)^alpha; the weight takes theta^alpha.
        return (2.0 * np.sinc(theta / math.pi)) ** alpha * np.cos(q * (0.5 * math.pi - theta)) ** e.p

    lhs = integrate_weighted(constant, -1.0, 1.0, alpha, alpha, tol)
    rhs = integrate_weighted(smooth_boundary, 0.0, 0.5 * math.pi, alpha, 0.0, 0.25 * tol).scaled(4.0)
    return _ratio_result(e, lhs, rhs)


def quadratic_epsilon_ratio(eps: float) -> float:
    """
    Normalized ratio of f_eps at p = 2 in closed form, alpha = 2 eps - 1:

        lhs = B(1/2, alpha + 1)
        rhs = 2^alpha B(1/2, (alpha + 1)/2) + pi

    The pi is int_0^pi Re(1 - e^{2i theta})^alpha d(theta), half the circle
    integral of a function whose mean value is 1.
    """
    if not 0.0 < eps < 0.5:
        raise ExponentException(f"Need 0 < eps < 1/2, got eps={eps}.")

    alpha = 2.0 * eps - 1.0
    lhs = beta(0.5, alpha + 1.0)
    rhs = 2.0**alpha * beta(0.5, 0.5 * (alpha + 1.0)) + math.pi
    return lhs / rhs


def epsilon_sweep(e: Exponent, eps_values: Iterable[float], tol: float = DEFAULT_TOL) -> list[RatioResult]:
    eps_values = list(eps_values)
    for eps in eps_values:
        _check_epsilon(e, eps)

    with ThreadPoolExecutor(max_workers=worker_count()) as executor:
        return list(executor.map(lambda eps: epsilon_ratio(e, eps, tol), eps_values))


class _BudgetExhausted(Exception):
    """
    Objective evaluation budget spent
    """


class _Objective:
    """Negated normalized ratio on unit coefficient vectors, remembering the best point"""

    def __init__(self, e: Exponent, tol: float, budget: int):
        self.e = e
        self.tol = tol
        self.budget = budget
        self.evaluations = 0
        self.best: Optional[RatioResult] = None
        self.argmax: Optional[np.ndarray] = None

    def __call__(self, point: np.ndarray) -> float:
        if self.evaluations >= self.budget:
            raise _BudgetExhausted()
        self.evaluations += 1

        try:
            result = ratio(self.e, TrigPolynomial.from_vector(point), self.tol)
        except ZeroFunction:
            return math.inf
        except QuadratureException as error:
            _LOGGER.warning("Objective evaluation %d for %s failed, scored as the worst point: %s", self.evaluations, self.e, error)
            return math.inf

        if self.best is None or result.normalized > self.best.normalized:
            self.best = result
            self.argmax = point.copy()
        return -result.normalized


def _project(point: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(point)
    return point / norm if norm > 0.0 else point


def _simplex_search(objective: _Objective, start: np.ndarray, step: float) -> bool:
    """
    Nelder-Mead minimization with every trial point projected onto the unit
    sphere. Returns True when the evaluation budget ran out first.
    """
    points = [start] + [_project(start + step * unit) for unit in np.eye(start.size)]

    try:
        values = [objective(point) for point in points]
        while True:
            order = np.argsort(values, kind="stable")
            points = [points[i] for i in order]
            values = [values[i] for i in order]

            spread = values[-1] - values[0]
            diameter = max(float(np.max(np.abs(point - points[0]))) for point in points[1:])
            if spread <= VALUE_SPREAD and diameter <= SIMPLEX_DIAMETER:
                return False

            centroid = np.mean(points[:-1], axis=0)
            worst = points[-1]

            reflected = _project(centroid + REFLECT * (centroid - worst))
            f_reflected = objective(reflected)

            if f_reflected < values[0]:
                expanded = _project(centroid + EXPAND * (reflected - centroid))
                f_expanded = objective(expanded)
                if f_expanded < f_reflected:
                    points[-1], values[-1] = expanded, f_expanded
                else:
                    points[-1], values[-1] = reflected, f_reflected
                continue

            if f_reflected < values[-2]:
                points[-1], values[-1] = reflected, f_reflected
                continue

            if f_reflected < values[-1]:
                contracted = _project(centroid + CONTRACT * (reflected - centroid))
                f_contracted = objective(contracted)
                accepted = f_contracted <= f_reflected
            else:
                contracted = _project(centroid + CONTRACT * (worst - centroid))
                f_contracted = objective(contracted)
                accepted = f_contracted < values[-1]

            if accepted:
                points[-1], values[-1] = contracted, f_contracted
                continue

            for i in range(1, len(points)):
                points[i] = _project(points[0] + SHRINK * (points[i] - points[0]))
                values[i] = objective(points[i])
    except _BudgetExhausted:
        return True


def maximize_ratio(
    e: Exponent,
    degree: int,
    budget: int = 50_000,
    seed: int = 42,
    tol: float = DEFAULT_TOL,
) -> OptimizationResult:
    """
    Search for the trigonometric polynomial of the given degree with the
    largest normalized ratio. The ratio is scale invariant, so the search
    runs on unit coefficient vectors; the start is a seeded random point.
    """
    if degree < 1:
        raise ExponentException(f"Maximization needs degree >= 1, got {degree}.")
    if budget < 100:
        raise ExponentException(f"Maximization needs a budget of at least 100 evaluations, got {budget}.")

    rng = np.random.default_rng(seed)
    start = _project(rng.standard_normal(2 * degree + 1))
    objective = _Objective(e, tol, budget)
    exhausted = _simplex_search(objective, start, SIMPLEX_STEP)

    if objective.best is None or objective.argmax is None:
        raise NonConvergence(f"No objective evaluation succeeded for {e} degree {degree} seed {seed}.")
    _LOGGER.info(
        "Maximized %s degree %d seed %d: %.12f after %d evaluations%s.",
        e,
        degree,
        seed,
        objective.best.normalized,
        objective.evaluations,
        " (budget exhausted)" if exhausted else "",
    )
    return OptimizationResult(
        best=objective.best,
        coefficients=tuple(float(c) for c in objective.argmax),
        evaluations=objective.evaluations,
        exhausted=exhausted,
        seed=seed,
    )


def maximize_restarts(
    e: Exponent,
    degree: int,
    budget: int,
    seeds: Iterable[int],
    tol: float = DEFAULT_TOL,
) -> list[OptimizationResult]:
    """Independent searches from several seeds, run concurrently"""
    with ThreadPoolExecutor(max_workers=worker_count()) as executor:
        return list(executor.map(lambda seed: maximize_ratio(e, degree, budget, seed, tol), list(seeds)))
