"""
    Quadrature
    ==========

    Adaptive double-exponential (tanh-sinh) integration with singularity
    hints. Every integral in the package goes through this module.

    Integrands are vectorized: they receive a numpy array of abscissae and
    return an array of the same shape. Callers that need full relative
    precision next to a singular point that is not exactly representable
    (pi, 2*pi, pi/2, cos(theta)) pass a ``near(anchor, offset)`` evaluator
    instead: the quadrature then hands over every node as a signed offset
    from the nearer end of its sub-interval and never forms the sum itself.

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import math
import logging

import numpy as np

from dataclasses import dataclass
from typing import Callable, Final, Iterable, Optional

from hardy_sharp.helpers import DivergentHint, NonConvergence, NonFinite, QuadratureException

_LOGGER: Final = logging.getLogger(__name__)

DEFAULT_TOL: Final = 1e-10
DEFAULT_BUDGET: Final = 2_000_000

# Abscissae beyond |t| = 6.5 have offsets below the smallest subnormal.
_T_MAX: Final = 6.5
_MIN_LEVEL: Final = 2
_MAX_LEVEL: Final = 8
_ROUNDING: Final = 64.0 * float(np.finfo(float).eps)
_TINY: Final = float(np.finfo(float).tiny)
# Folded tail nodes past this abscissa are dropped unless the caller folds the tail itself.
_Y_CUTOFF: Final = 1e150
# A plain integrand cannot be sampled within an ulp of a hinted end away from zero; the
# first _CUT of such a piece is cut off and its mass taken from the hinted power law.
_CUT: Final = 2.0**-16
_MIN_CUT_ULPS: Final = 2.0**12

Integrand = Callable[[np.ndarray], np.ndarray]
OffsetIntegrand = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SingularityHint:
    """Integrand behaves like |x - location|^exponent near location."""

    location: float
    exponent: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.location):
            raise QuadratureException(f"Hint location must be finite, got {self.location}.")
        if not self.exponent > -1.0:
            raise DivergentHint(f"Hint exponent {self.exponent} at {self.location} makes the integral diverge.")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            self.evaluations + other.evaluations,
        )

    def scaled(self, factor: float) -> "QuadratureResult":
        return QuadratureResult(factor * self.value, abs(factor) * self.error_estimate, self.evaluations)


def _abscissae(level: int) -> np.ndarray:
    """New tanh-sinh abscissae t introduced at a refinement level (step 2^-level)"""
    if level == 0:
        n = int(_T_MAX)
        return np.arange(-n, n + 1, dtype=float)

    h = 2.0**-level
    odd = np.arange(1, int(_T_MAX / h) + 1, 2, dtype=float) * h
    return np.concatenate((-odd[::-1], odd))


def _as_values(values: np.ndarray | float, shape: tuple[int, ...]) -> np.ndarray:
    return np.broadcast_to(np.asarray(values, dtype=float), shape)


def _call(integrand: Callable[[np.ndarray], np.ndarray | float], x: np.ndarray) -> np.ndarray:
    if x.size == 0:
        return np.empty(0)
    return _as_values(integrand(x), x.shape)


def _evaluate(
    f: Optional[Integrand],
    near: Optional[OffsetIntegrand],
    lo: float,
    hi: float,
    t: np.ndarray,
) -> tuple[float, float, int]:
    """Weighted sum over the abscissae t on [lo, hi]; returns (sum, sum of |terms|, evaluations)"""
    length = hi - lo
    big_e = np.exp(-np.pi * np.abs(np.sinh(t)))
    offset = length * big_e / (1.0 + big_e)
    weight = length * np.pi * np.cosh(t) * big_e / (1.0 + big_e) ** 2

    # Subnormal offsets would overflow algebraic singularities.
    keep = (offset > _TINY) & (weight > 0.0)
    left = keep & (t <= 0.0)
    right = keep & (t > 0.0)
    left_x = lo + offset[left]
    right_x = hi - offset[right]
    left_weight = weight[left]
    right_weight = weight[right]

    with np.errstate(all="ignore"):
        if near is not None:
            left_values = _call(lambda d: near(lo, d), offset[left])
            right_values = _call(lambda d: near(hi, -d), offset[right])
        else:
            # Nodes that round onto an endpoint sit on the hinted set.
            inner_left = (left_x > lo) & (left_x < hi)
            inner_right = (right_x > lo) & (right_x < hi)
            left_x, left_weight = left_x[inner_left], left_weight[inner_left]
            right_x, right_weight = right_x[inner_right], right_weight[inner_right]
            left_values = _call(f, left_x)  # type: ignore[arg-type]
            right_values = _call(f, right_x)  # type: ignore[arg-type]

        values = np.concatenate((left_values, right_values))
        _check_finite(values, np.concatenate((left_x, right_x)))
        terms = np.concatenate((left_weight * left_values, right_weight * right_values))

    return float(np.sum(terms)), float(np.sum(np.abs(terms))), int(values.size)


def _check_finite(values: np.ndarray, abscissae: np.ndarray) -> None:
    bad = ~np.isfinite(values)
    if np.any(bad):
        where = abscissae[bad][0]
        raise NonFinite(f"Integrand is not finite at x={where!r} ({values[bad][0]!r}).")


def _tanh_sinh(
    f: Optional[Integrand],
    near: Optional[OffsetIntegrand],
    lo: float,
    hi: float,
    tol: float,
    budget_left: int,
) -> tuple[float, float, int, bool]:
    """Refine the step on one sub-interval; returns (value, error, evaluations, converged)"""
    raw = 0.0
    raw_abs = 0.0
    evaluations = 0
    previous: Optional[float] = None
    estimate = 0.0
    difference = math.inf

    for level in range(_MAX_LEVEL + 1):
        t = _abscissae(level)
        if evaluations + t.size > budget_left:
            raise NonConvergence(f"Evaluation budget exhausted while integrating over [{lo!r}, {hi!r}].")

        partial, partial_abs, count = _evaluate(f, near, lo, hi, t)
        evaluations += count
        raw += partial
        raw_abs += partial_abs

        h = 2.0**-level
        estimate = h * raw
        floor = _ROUNDING * h * raw_abs

        if previous is not None:
            difference = abs(estimate - previous)
            if level >= _MIN_LEVEL and difference <= max(tol, floor):
                return estimate, max(difference, floor), evaluations, True
        previous = estimate

    return estimate, difference, evaluations, False


def _breakpoints(a: float, b: float, hints: Iterable[SingularityHint]) -> list[float]:
    inner = sorted({hint.location for hint in hints if a < hint.location < b})
    return [a, *inner, b]


def _power_law_mass(f: Integrand, end: float, inward: float, exponent: float, delta: float) -> tuple[QuadratureResult, float]:
    """
    Mass of f over the first delta next to a singular end.

    f d^-alpha is fitted by a quadratic in d through d = delta, 2 delta and
    3 delta; the sample at 4 delta checks the fit and sets the error
    estimate, together with the mass of the nodes that will round onto the
    cut. Returns the mass and the abscissa where the remaining piece starts.
    """
    x = end + inward * delta * np.arange(1.0, 5.0)
    d = np.abs(x - end)
    with np.errstate(all="ignore"):
        values = _call(f, x)
        _check_finite(values, x)
        g = values * d**-exponent

    u = d / d[0]
    curve = np.polyfit(u[:3], g[:3], 2)
    c2, c1, c0 = curve
    mass = d[0] ** (1.0 + exponent) * (c0 / (1.0 + exponent) + c1 / (2.0 + exponent) + c2 / (3.0 + exponent))
    mismatch = abs(np.polyval(curve, u[3]) - g[3]) / max(abs(g[3]), _TINY)
    error = (2.0 * mismatch + _ROUNDING) * abs(mass) + abs(values[0]) * math.ulp(x[0])
    return QuadratureResult(float(mass), float(error), int(values.size)), float(x[0])


def _cut_singular_ends(
    f: Integrand,
    breakpoints: list[float],
    hints: Iterable[SingularityHint],
) -> tuple[list[tuple[float, float]], QuadratureResult]:
    """Pieces between the breakpoints, less the neighbourhoods of hinted singular ends away from zero"""
    exponents: dict[float, float] = {}
    for hint in hints:
        exponents[hint.location] = min(hint.exponent, exponents.get(hint.location, hint.exponent))

    def singular(end: float, delta: float) -> bool:
        return end != 0.0 and exponents.get(end, 0.0) < 0.0 and delta >= _MIN_CUT_ULPS * math.ulp(end)

    pieces = []
    cut_off = QuadratureResult(0.0, 0.0, 0)
    for lo, hi in zip(breakpoints, breakpoints[1:]):
        delta = _CUT * (hi - lo)
        start, stop = lo, hi
        if singular(lo, delta):
            mass, start = _power_law_mass(f, lo, 1.0, exponents[lo], delta)
            cut_off += mass
        if singular(hi, delta):
            mass, stop = _power_law_mass(f, hi, -1.0, exponents[hi], delta)
            cut_off += mass
        if (start, stop) != (lo, hi):
            _LOGGER.debug("Cut [%r, %r] to [%r, %r], power-law mass %.16g.", lo, hi, start, stop, cut_off.value)
        pieces.append((start, stop))

    return pieces, cut_off


def _integrate_pieces(
    f: Optional[Integrand],
    near: Optional[OffsetIntegrand],
    pieces: list[tuple[float, float]],
    tol: float,
    budget: int,
) -> QuadratureResult:
    share = tol / len(pieces)
    stack = [(lo, hi, share) for lo, hi in pieces]
    stack.reverse()

    value = 0.0
    error = 0.0
    evaluations = 0
    while stack:
        lo, hi, piece_tol = stack.pop()
        piece_value, piece_error, count, converged = _tanh_sinh(f, near, lo, hi, piece_tol, budget - evaluations)
        evaluations += count
        if converged:
            value += piece_value
            error += piece_error
            continue

        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise NonConvergence(f"Sub-interval [{lo!r}, {hi!r}] cannot be bisected further.")
        _LOGGER.debug("Bisecting [%r, %r] (difference %.3e above %.3e).", lo, hi, piece_error, piece_tol)
        stack.append((mid, hi, 0.5 * piece_tol))
        stack.append((lo, mid, 0.5 * piece_tol))

    return QuadratureResult(value, error, evaluations)


def _check_request(a: float, b: float, tol: float) -> None:
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise QuadratureException(f"Invalid interval [{a!r}, {b!r}].")
    if not (math.isfinite(tol) and tol > 0):
        raise QuadratureException(f"Tolerance must be positive, got {tol!r}.")


def integrate(
    f: Optional[Integrand],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    hints: Iterable[SingularityHint] = (),
    *,
    near: Optional[OffsetIntegrand] = None,
    budget: int = DEFAULT_BUDGET,
) -> QuadratureResult:
    """
    Integrate f over [a, b].

    The interval is pre-split at every hint strictly inside (a, b); each
    piece is integrated by tanh-sinh, whose endpoint clustering absorbs the
    algebraic singularities announced by the hints. When ``near`` is given it
    replaces ``f`` and receives (anchor, offset) pairs. Without it, a hinted
    singular end away from zero is cut off at 2^-16 of its piece and the
    mass of the cut is taken from the hinted power law.
    """
    _check_request(a, b, tol)
    if f is None and near is None:
        raise QuadratureException("An integrand is required.")

    hints = tuple(hints)
    breakpoints = _breakpoints(a, b, hints)
    if near is None:
        pieces, cut_off = _cut_singular_ends(f, breakpoints, hints)  # type: ignore[arg-type]
        result = _integrate_pieces(f, None, pieces, tol, budget - cut_off.evaluations) + cut_off
    else:
        result = _integrate_pieces(None, near, list(zip(breakpoints, breakpoints[1:])), tol, budget)

    _LOGGER.debug(
        "Integral over [%r, %r] with %d hints: %.16g +- %.2e (%d evaluations).",
        a,
        b,
        len(hints),
        result.value,
        result.error_estimate,
        result.evaluations,
    )
    return result


def _fold(f: Integrand) -> Integrand:
    """u -> f(1/u) / u^2 on (0, 1]"""

    def folded(u: np.ndarray) -> np.ndarray:
        out = np.zeros_like(u)
        inside = u > 1.0 / _Y_CUTOFF
        kept = u[inside]
        out[inside] = _as_values(f(1.0 / kept), kept.shape) / (kept * kept)
        return out

    return folded


def integrate_semi_infinite(
    f: Integrand,
    tol: float = DEFAULT_TOL,
    hints: Iterable[SingularityHint] = (),
    *,
    reflected: Optional[Integrand] = None,
    budget: int = DEFAULT_BUDGET,
) -> QuadratureResult:
    """
    Integrate f over (0, inf).

    The range is split at y = 1 and the tail is folded back by y = 1/u, so
    both halves are integrals over (0, 1]. ``reflected`` supplies f(1/u)/u^2
    in closed form for tails that decay too slowly to be cut off; without it
    the tail nodes past y = 1e150 are dropped.
    """
    if not (math.isfinite(tol) and tol > 0):
        raise QuadratureException(f"Tolerance must be positive, got {tol!r}.")

    hints = tuple(hints)
    head_hints = [hint for hint in hints if 0.0 <= hint.location <= 1.0]
    tail_hints = [SingularityHint(1.0 / hint.location, hint.exponent) for hint in hints if hint.location > 1.0]

    head = integrate(f, 0.0, 1.0, 0.5 * tol, head_hints, budget=budget)
    tail = integrate(reflected or _fold(f), 0.0, 1.0, 0.5 * tol, tail_hints, budget=budget - head.evaluations)
    return head + tail


def integrate_weighted(
    g: Integrand,
    a: float,
    b: float,
    left_exponent: float = 0.0,
    right_exponent: float = 0.0,
    tol: float = DEFAULT_TOL,
    *,
    budget: int = DEFAULT_BUDGET,
) -> QuadratureResult:
    """
    Integrate (x - a)^alpha (b - x)^beta g(x) over [a, b] for smooth g.

    Each half of the interval is mapped by x - a = L v^(1 / (1 + alpha))
    (mirrored on the right), which turns the algebraic weight into the
    constant L^(1 + alpha) / (1 + alpha). This resolves exponents arbitrarily
    close to -1, where the mass next to the endpoint lies below the smallest
    representable offset.
    """
    _check_request(a, b, tol)
    for exponent in (left_exponent, right_exponent):
        if not exponent > -1.0:
            raise DivergentHint(f"Weight exponent {exponent} makes the integral diverge.")

    full = b - a
    half = 0.5 * full
    left_power = 1.0 / (1.0 + left_exponent)
    right_power = 1.0 / (1.0 + right_exponent)
    left_factor = half ** (1.0 + left_exponent) / (1.0 + left_exponent)
    right_factor = half ** (1.0 + right_exponent) / (1.0 + right_exponent)

    def left_part(v: np.ndarray) -> np.ndarray:
        step = half * v**left_power
        return (full - step) ** right_exponent * _as_values(g(a + step), step.shape)

    def right_part(v: np.ndarray) -> np.ndarray:
        step = half * v**right_power
        return (full - step) ** left_exponent * _as_values(g(b - step), step.shape)

    with np.errstate(under="ignore"):
        left = integrate(left_part, 0.0, 1.0, 0.5 * tol / left_factor, budget=budget).scaled(left_factor)
        right = integrate(right_part, 0.0, 1.0, 0.5 * tol / right_factor, budget=budget - left.evaluations).scaled(right_factor)

    return left + right
