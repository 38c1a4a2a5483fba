import cmath
import math

import numpy as np
import pytest

from scipy.special import gamma

from hardy_sharp.constants import make_exponent, sharp_constant
from hardy_sharp.experiments import (
    epsilon_boundary,
    epsilon_ratio,
    epsilon_sweep,
    find_zeros,
    maximize_ratio,
    maximize_restarts,
    quadratic_epsilon_ratio,
    random_harmonic,
    ratio,
    sample_ratios,
)
from hardy_sharp import experiments
from hardy_sharp.helpers import ExponentException, NonConvergence, ZeroFunction
from hardy_sharp.models import Exponent, SampleSpec
from hardy_sharp.poisson import TrigPolynomial
from tests.conftest import P_GRID, TOL

SMALL_FAMILY = SampleSpec(degree=4, count=12, seed=7)


def test_random_harmonic_is_deterministic() -> None:
    first = random_harmonic(SMALL_FAMILY, 3)
    again = random_harmonic(SMALL_FAMILY, 3)
    other = random_harmonic(SMALL_FAMILY, 4)
    np.testing.assert_array_equal(first.to_vector(), again.to_vector())
    assert not np.array_equal(first.to_vector(), other.to_vector())
    assert first.degree == 4


def test_random_harmonic_depends_on_seed() -> None:
    reseeded = SampleSpec(degree=4, count=12, seed=8)
    assert not np.array_equal(random_harmonic(SMALL_FAMILY, 0).to_vector(), random_harmonic(reseeded, 0).to_vector())


def test_random_harmonic_without_decay_or_degree() -> None:
    constant = random_harmonic(SampleSpec(degree=0, count=1), 0)
    assert constant.degree == 0
    assert constant.to_vector().shape == (1,)


@pytest.mark.parametrize("index", [-1, 12])
def test_random_harmonic_rejects_index(index: int) -> None:
    with pytest.raises(ExponentException):
        random_harmonic(SMALL_FAMILY, index)


def test_find_zeros() -> None:
    zeros = find_zeros(np.cos, 0.0, 2.0 * math.pi)
    assert len(zeros) == 2
    assert math.isclose(zeros[0], 0.5 * math.pi, rel_tol=1e-14)
    assert math.isclose(zeros[1], 1.5 * math.pi, rel_tol=1e-14)
    assert find_zeros(lambda x: x * x + 1.0, -1.0, 1.0) == []
    # Zeros on the interval ends are not split points.
    assert find_zeros(np.sin, 0.0, math.pi) == []


@pytest.mark.parametrize(
    "f, expected",
    [
        (TrigPolynomial(1.0), 1.0 / math.pi),
        (TrigPolynomial(0.0, [1.0], [0.0]), 2.0 / (3.0 * math.pi)),
        (TrigPolynomial(0.0, [0.0, 1.0], [0.0, 0.0]), 2.0 / (5.0 * math.pi)),
    ],
    ids=["constant", "cos", "cos2"],
)
def test_closed_form_ratios(two: Exponent, f: TrigPolynomial, expected: float) -> None:
    assert math.isclose(ratio(two, f, 1e-12).normalized, expected, rel_tol=1e-10)


def test_constant_ratio_for_every_exponent(spot_exponent: Exponent) -> None:
    result = ratio(spot_exponent, TrigPolynomial(1.0), 1e-12)
    assert math.isclose(result.ratio, 1.0 / math.pi, rel_tol=1e-11)
    assert math.isclose(result.normalized, 1.0 / (math.pi * sharp_constant(spot_exponent)), rel_tol=1e-11)


def test_zero_function(two: Exponent) -> None:
    with pytest.raises(ZeroFunction):
        ratio(two, TrigPolynomial(0.0, [0.0], [0.0]))


@pytest.mark.parametrize("factor", [1e-6, 3.0, 1e5])
def test_ratio_is_scale_invariant(spot_exponent: Exponent, factor: float) -> None:
    f = random_harmonic(SMALL_FAMILY, 0)
    base = ratio(spot_exponent, f, TOL)
    scaled = ratio(spot_exponent, f.scaled(factor), TOL)
    assert math.isclose(scaled.normalized, base.normalized, rel_tol=1e-10)
    assert math.isclose(scaled.lhs, factor**spot_exponent.p * base.lhs, rel_tol=1e-10)


@pytest.mark.parametrize("angle", [0.4, 0.5 * math.pi, 2.0])
def test_rotated_diameter_stays_bounded(spot_exponent: Exponent, angle: float) -> None:
    result = ratio(spot_exponent, random_harmonic(SMALL_FAMILY, 1), TOL, angle)
    assert result.normalized <= 1.0 + 1e-8


def test_sampled_ratios_stay_bounded(spot_exponent: Exponent) -> None:
    outcomes = sample_ratios(spot_exponent, SMALL_FAMILY, TOL)
    assert [o.index for o in outcomes] == list(range(SMALL_FAMILY.count))
    assert all(o.failure is None for o in outcomes)
    assert max(o.result.normalized for o in outcomes) <= 1.0 + 1e-8


@pytest.mark.parametrize("theta", [0.3, 1.2, 2.0, 4.0])
def test_epsilon_boundary_matches_principal_branch(spot_exponent: Exponent, theta: float) -> None:
    eps = 0.5 * spot_exponent.inv_p
    expected = (1.0 - cmath.exp(2j * theta)) ** (eps - spot_exponent.inv_p)
    assert math.isclose(float(epsilon_boundary(spot_exponent, eps)(theta)), expected.real, rel_tol=1e-12)


@pytest.mark.parametrize("eps", [0.2, 0.05, 0.01])
def test_epsilon_ratio_closed_form_at_two(two: Exponent, eps: float) -> None:
    alpha = 2.0 * eps - 1.0
    lhs = math.sqrt(math.pi) * gamma(alpha + 1.0) / gamma(alpha + 1.5)
    rhs = 2.0**alpha * math.sqrt(math.pi) * gamma(0.5 * (alpha + 1.0)) / gamma(0.5 * alpha + 1.0) + math.pi
    result = epsilon_ratio(two, eps, TOL)
    assert math.isclose(result.lhs, lhs, rel_tol=1e-8)
    assert math.isclose(result.rhs_raw, rhs, rel_tol=1e-8)
    assert math.isclose(result.normalized, quadratic_epsilon_ratio(eps), rel_tol=1e-8)


def test_quadratic_epsilon_ratio() -> None:
    assert 0.94 < quadratic_epsilon_ratio(0.01) < 0.95
    assert math.isclose(quadratic_epsilon_ratio(0.5 - 1e-9), 1.0 / math.pi, rel_tol=1e-6)
    with pytest.raises(ExponentException):
        quadratic_epsilon_ratio(0.5)


# Normalized ratio at eps = 0.01 from an independent high-order quadrature of both sides.
TERMINAL_EPSILON_RATIOS = {1.25: 0.890460032524704, 2.0: 0.941947660386847, 4.0: 0.953161034299504}


@pytest.mark.parametrize("p", [1.25, 2.0, 4.0])
def test_epsilon_sweep_increases_towards_one(p: float) -> None:
    e = make_exponent(p)
    eps_values = [eps for eps in (0.2, 0.1, 0.05, 0.02, 0.01) if eps < e.inv_p]
    values = [result.normalized for result in epsilon_sweep(e, eps_values, TOL)]
    assert all(left < right for left, right in zip(values, values[1:]))
    assert values[-1] <= 1.0 + 1e-8
    assert math.isclose(values[-1], TERMINAL_EPSILON_RATIOS[p], rel_tol=1e-8)


def test_epsilon_ratio_near_the_constant_function(two: Exponent) -> None:
    result = epsilon_ratio(two, 0.5 - 1e-6, TOL)
    assert math.isclose(result.normalized, 1.0 / math.pi, rel_tol=1e-4)


@pytest.mark.parametrize("eps", [0.0, -0.1, 0.25, 0.3])
def test_epsilon_rejects_out_of_range(eps: float) -> None:
    e = make_exponent(4.0)
    with pytest.raises(ExponentException):
        epsilon_ratio(e, eps)
    with pytest.raises(ExponentException):
        epsilon_sweep(e, [0.1, eps])


def test_maximize_ratio_stays_below_the_sharp_constant(two: Exponent) -> None:
    result = maximize_ratio(two, 1, budget=300, seed=5, tol=TOL)
    assert result.best.normalized <= 1.0 + 1e-6
    assert result.evaluations <= 300
    assert len(result.coefficients) == 3
    assert math.isclose(float(np.linalg.norm(result.coefficients)), 1.0, rel_tol=1e-12)
    assert result.seed == 5


def test_maximize_ratio_improves_on_its_start(two: Exponent) -> None:
    result = maximize_ratio(two, 1, budget=300, seed=5, tol=TOL)
    start = np.random.default_rng(5).standard_normal(3)
    assert result.best.normalized >= ratio(two, TrigPolynomial.from_vector(start), TOL).normalized - 1e-9


def test_maximize_ratio_is_deterministic(two: Exponent) -> None:
    first = maximize_ratio(two, 1, budget=200, seed=9, tol=TOL)
    again = maximize_ratio(two, 1, budget=200, seed=9, tol=TOL)
    assert first == again


def test_maximize_restarts_keep_seed_order(two: Exponent) -> None:
    results = maximize_restarts(two, 1, 150, [3, 1, 2], TOL)
    assert [result.seed for result in results] == [3, 1, 2]


def test_maximize_ratio_scores_failed_evaluations_as_worst(two: Exponent, monkeypatch: pytest.MonkeyPatch) -> None:
    exact = experiments.ratio
    calls = []

    def flaky(e: Exponent, f: TrigPolynomial, tol: float = TOL, angle: float = 0.0):
        calls.append(f)
        if len(calls) % 3 == 0:
            raise NonConvergence("budget exhausted")
        return exact(e, f, tol, angle)

    monkeypatch.setattr(experiments, "ratio", flaky)
    result = maximize_ratio(two, 1, budget=150, seed=5, tol=TOL)
    assert result.evaluations == len(calls) <= 150
    assert 0.0 < result.best.normalized <= 1.0 + 1e-6


def test_maximize_ratio_fails_when_every_evaluation_fails(two: Exponent, monkeypatch: pytest.MonkeyPatch) -> None:
    def failing(*args, **kwargs):
        raise NonConvergence("budget exhausted")

    monkeypatch.setattr(experiments, "ratio", failing)
    with pytest.raises(NonConvergence):
        maximize_ratio(two, 1, budget=120, seed=5, tol=TOL)


@pytest.mark.parametrize("degree, budget", [(0, 1000), (2, 99)])
def test_maximize_rejects_arguments(two: Exponent, degree: int, budget: int) -> None:
    with pytest.raises(ExponentException):
        maximize_ratio(two, degree, budget)


@pytest.mark.slow
@pytest.mark.parametrize("p", P_GRID)
def test_default_family_stays_bounded(p: float) -> None:
    outcomes = sample_ratios(make_exponent(p), SampleSpec(), TOL)
    assert max(o.result.normalized for o in outcomes) <= 1.0 + 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("p", [1.25, 2.0, 4.0])
def test_optimizer_battery(p: float) -> None:
    results = maximize_restarts(make_exponent(p), 8, 50_000, range(42, 52), TOL)
    assert max(result.best.normalized for result in results) <= 1.0 + 1e-6
