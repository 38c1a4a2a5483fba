"""
    Schur proof verifier
    ====================

    Checks, angle by angle, every step of the proof that the harmonic
    Riesz-Fejer constant is K_p: the pointwise Schur inequality for the
    certificate h, the r -> -r symmetry reduction, the three equivalent
    representations of

        F(theta) = int_0^{pi/2} sin^{1/p}x cos^{1/p}x / sin^{2/p}(x + theta/2) dx,

    convexity of F through the Phi integral, and the endpoint identity
    F(0) = F(pi) = pi / (2 cos(pi / 2p)).

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import math
import logging

import numpy as np

from concurrent.futures import ThreadPoolExecutor
from typing import Final, Iterable, Optional

from hardy_sharp.constants import f_bound, schur_constant
from hardy_sharp.helpers import ExponentException, QuadratureException, worker_count
from hardy_sharp.models import ConvexityRow, Exponent, ProofGrid, ProofRow, VerificationReport
from hardy_sharp.poisson import adjoint, one_minus_square
from hardy_sharp.quadrature import (
    DEFAULT_TOL,
    OffsetIntegrand,
    QuadratureResult,
    SingularityHint,
    integrate,
    integrate_semi_infinite,
)

_LOGGER: Final = logging.getLogger(__name__)

HALF_PI: Final = 0.5 * math.pi

STRESS_ANGLES: Final = (1e-3, 1e-2, math.pi - 1e-2, math.pi - 1e-3)
FD_STEP: Final = 1e-3


def _check_open_angle(theta: float) -> None:
    if not 0.0 < theta < math.pi:
        raise ExponentException(f"Angle must lie strictly inside (0, pi), got {theta}.")


def _check_closed_angle(theta: float) -> None:
    if not 0.0 <= theta <= math.pi:
        raise ExponentException(f"Angle must lie in [0, pi], got {theta}.")


def _lhs_at(e: Exponent, theta: float, tol: float) -> QuadratureResult:
    # T*((Th)^{p-1}) with Th(r) = (1 - r^2)^{-1/p}; no restriction on theta beyond theta != 0 mod 2pi.
    power = e.inv_p - 1.0

    def g(r: np.ndarray) -> np.ndarray:
        return (1.0 - r * r) ** power

    def g_near(anchor: float, offset: np.ndarray) -> np.ndarray:
        return one_minus_square(anchor, offset) ** power

    hints = (SingularityHint(-1.0, e.inv_p), SingularityHint(1.0, e.inv_p))
    return adjoint(g, theta, hints, tol, g_near=g_near)


def lhs_schur(e: Exponent, theta: float, tol: float = DEFAULT_TOL) -> QuadratureResult:
    """int_{-1}^{1} (1 - r^2)^{1/p} / (1 - 2r cos(theta) + r^2) dr"""
    _check_open_angle(theta)
    return _lhs_at(e, theta, tol)


def rhs_schur(e: Exponent, theta: float, cp_factor: float = 1.0) -> float:
    """C_p 2^{-(p-1)/p} sin^{-(p-1)/p}(theta) cos^{p-1}(pi/2p - theta/p), i.e. C_p h^{p-1}"""
    _check_open_angle(theta)
    q = 1.0 - e.inv_p
    return (
        cp_factor
        * schur_constant(e)
        * (2.0 * math.sin(theta)) ** (-q)
        * math.cos(e.half_angle - theta * e.inv_p) ** (e.p - 1.0)
    )


def pointwise_margin(e: Exponent, theta: float, tol: float = DEFAULT_TOL, cp_factor: float = 1.0) -> float:
    return rhs_schur(e, theta, cp_factor) - lhs_schur(e, theta, tol).value


def _split_angles(anchor: float, offset: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """x and y = pi/2 - x, each exact when it is the small one"""
    if anchor == 0.0:
        return offset, (HALF_PI - offset)
    if anchor == HALF_PI:
        return HALF_PI + offset, -offset
    return anchor + offset, (HALF_PI - anchor) - offset


def _shifted_sine(x: np.ndarray, y: np.ndarray, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """sin and cos of x + theta/2, written through y = pi/2 - x past pi/4"""
    lower = x <= 0.25 * math.pi
    phase = np.where(lower, x + 0.5 * theta, y + 0.5 * (math.pi - theta))
    # sin(x + theta/2) = sin(y + (pi - theta)/2); the cosine only flips sign.
    return np.sin(phase), np.cos(phase)


def _f_near(e: Exponent, theta: float) -> OffsetIntegrand:
    def near(anchor: float, offset: np.ndarray) -> np.ndarray:
        x, y = _split_angles(anchor, offset)
        sine, _ = _shifted_sine(x, y, theta)
        # (sin x sin y)^{1/p} / s^{2/p} without overflow next to a vanishing denominator.
        return (np.sin(x) / sine) ** e.inv_p * (np.sin(y) / sine) ** e.inv_p

    return near


def F_x(e: Exponent, theta: float, tol: float = DEFAULT_TOL) -> QuadratureResult:
    """F(theta) as the x-integral over [0, pi/2]"""
    _check_closed_angle(theta)
    hints = [SingularityHint(0.0, e.inv_p), SingularityHint(HALF_PI, e.inv_p)]
    if theta == 0.0:
        hints.append(SingularityHint(0.0, -e.inv_p))
    elif theta == math.pi:
        hints.append(SingularityHint(HALF_PI, -e.inv_p))

    return integrate(None, 0.0, HALF_PI, tol, hints, near=_f_near(e, theta))


def F_y(e: Exponent, theta: float, tol: float = DEFAULT_TOL) -> QuadratureResult:
    """F(theta) as int_0^inf y^{1/p} (y^2 + 1)^{-1} (y cos(theta/2) + sin(theta/2))^{-2/p} dy"""
    _check_closed_angle(theta)
    # Through pi - theta so that theta = pi zeroes the cosine exactly, as in F_x.
    cos_half = math.sin(0.5 * (math.pi - theta))
    sin_half = math.sin(0.5 * theta)
    hints = [SingularityHint(0.0, -e.inv_p if theta == 0.0 else e.inv_p)]

    def kernel(y: np.ndarray, slope: float, intercept: float) -> np.ndarray:
        linear = y * slope + intercept
        return (y / linear) ** e.inv_p * linear ** (-e.inv_p) / (y * y + 1.0)

    def integrand(y: np.ndarray) -> np.ndarray:
        return kernel(y, cos_half, sin_half)

    # y -> 1/y maps the integrand onto itself with the half-angle sine and cosine swapped.
    def reflected(u: np.ndarray) -> np.ndarray:
        return kernel(u, sin_half, cos_half)

    return integrate_semi_infinite(integrand, tol, hints, reflected=reflected)


def F_from_r(e: Exponent, theta: float, tol: float = DEFAULT_TOL) -> QuadratureResult:
    """F(theta) recovered from the Schur left-hand side, 2^{-1/p} sin^{(p-1)/p}(theta) lhs_schur"""
    _check_open_angle(theta)
    factor = 2.0 ** (-e.inv_p) * math.sin(theta) ** (1.0 - e.inv_p)
    return lhs_schur(e, theta, tol / factor).scaled(factor)


def phi(e: Exponent, x: np.ndarray | float, theta: np.ndarray | float) -> np.ndarray | float:
    """Integrand of 2p F''(theta); positive on the open square"""
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    shifted = x + 0.5 * theta
    sine = np.sin(shifted)
    bracket = (1.0 + 2.0 * e.inv_p) * np.cos(shifted) ** 2 + sine**2
    values = (np.sin(x) * np.cos(x)) ** e.inv_p / sine ** (2.0 + 2.0 * e.inv_p) * bracket
    return float(values) if values.ndim == 0 else values


def F_second_derivative(e: Exponent, theta: float, tol: float = DEFAULT_TOL) -> QuadratureResult:
    """F''(theta) = (1/2p) int_0^{pi/2} Phi(x, theta) dx"""
    if not 0.0 < theta < math.pi:
        raise ExponentException(f"F'' diverges at the endpoints; need 0 < theta < pi, got {theta}.")

    scale = 0.5 * e.inv_p

    def near(anchor: float, offset: np.ndarray) -> np.ndarray:
        x, y = _split_angles(anchor, offset)
        sine, cosine = _shifted_sine(x, y, theta)
        bracket = (1.0 + 2.0 * e.inv_p) * cosine**2 + sine**2
        return (np.sin(x) / sine) ** e.inv_p * (np.sin(y) / sine) ** e.inv_p * bracket / (sine * sine)

    hints = (SingularityHint(0.0, e.inv_p), SingularityHint(HALF_PI, e.inv_p))
    return integrate(None, 0.0, HALF_PI, tol / scale, hints, near=near).scaled(scale)


def symmetry_check(e: Exponent, theta: float, tol: float = DEFAULT_TOL) -> float:
    """|lhs at theta + pi - lhs at theta|; r -> -r maps one integral onto the other"""
    _check_open_angle(theta)
    shifted = _lhs_at(e, theta + math.pi, tol)
    direct = lhs_schur(e, theta, tol)
    return abs(shifted.value - direct.value)


def endpoint_values(e: Exponent, tol: float = DEFAULT_TOL) -> tuple[QuadratureResult, QuadratureResult]:
    """F(0) and F(pi) with their error estimates"""
    return F_x(e, 0.0, tol), F_x(e, math.pi, tol)


def endpoint_check(e: Exponent, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Residuals F(0) - B_p and F(pi) - B_p"""
    bound = f_bound(e)
    at_zero, at_pi = endpoint_values(e, tol)
    residuals = (at_zero.value - bound, at_pi.value - bound)
    _LOGGER.debug("Endpoint residuals %s: %.3e, %.3e.", e, *residuals)
    return residuals


def bound_chain_margin(e: Exponent, theta: float) -> float:
    """cos(pi/2p - theta/p) - cos(pi/2p), non-negative on [0, pi]"""
    _check_closed_angle(theta)
    return math.cos(e.half_angle - theta * e.inv_p) - math.cos(e.half_angle)


def endpoint_rhs(e: Exponent, theta: float, cp_factor: float = 1.0) -> float:
    """Schur right-hand side times 2^{-1/p} sin^{(p-1)/p}(theta); finite on [0, pi]"""
    _check_closed_angle(theta)
    return cp_factor * 0.5 * schur_constant(e) * math.cos(e.half_angle - theta * e.inv_p) ** (e.p - 1.0)


def default_grid(
    e: Exponent,
    points: int = 199,
    tol: float = DEFAULT_TOL,
    slack: float = 1e-8,
    stress: bool = True,
) -> ProofGrid:
    """pi k / (points + 1), k = 1..points, plus the near-singular stress angles"""
    if points < 1:
        raise ExponentException(f"Grid needs at least one point, got {points}.")

    thetas = {math.pi * k / (points + 1) for k in range(1, points + 1)}
    if stress:
        thetas.update(STRESS_ANGLES)
    return ProofGrid(p=e, thetas=tuple(sorted(thetas)), tol=tol, slack=slack)


def convexity_rows(
    e: Exponent,
    thetas: Iterable[float],
    tol: float = DEFAULT_TOL,
    delta: float = FD_STEP,
) -> list[ConvexityRow]:
    """Pair F'' from the Phi integral with the central second difference of F"""
    thetas = list(thetas)
    for theta in thetas:
        _check_open_angle(theta)
        if theta - delta < 0.0 or theta + delta > math.pi:
            raise ExponentException(f"Difference step {delta} leaves [0, pi] at theta={theta}.")

    # The second difference divides by delta^2; F is integrated that much tighter.
    fd_tol = min(tol, 1e-12)

    def row(theta: float) -> ConvexityRow:
        second = F_second_derivative(e, theta, tol)
        samples = [F_x(e, t, fd_tol).value for t in (theta - delta, theta, theta + delta)]
        difference = (samples[0] - 2.0 * samples[1] + samples[2]) / (delta * delta)
        return ConvexityRow(
            theta=theta,
            f2_phi=second.value,
            f2_fd=difference,
            rel_diff=abs(difference - second.value) / abs(second.value),
            error_estimate=second.error_estimate,
        )

    with ThreadPoolExecutor(max_workers=worker_count()) as executor:
        return list(executor.map(row, thetas))


def _interior_row(grid: ProofGrid, theta: float, cp_factor: float) -> ProofRow:
    e = grid.p
    try:
        lhs = lhs_schur(e, theta, grid.tol)
        rhs = rhs_schur(e, theta, cp_factor)
        f_x = F_x(e, theta, grid.tol)
        f_y = F_y(e, theta, grid.tol)
        f_r = F_from_r(e, theta, grid.tol)
        second: Optional[QuadratureResult] = None
        if grid.convexity_delta <= theta <= math.pi - grid.convexity_delta:
            second = F_second_derivative(e, theta, grid.tol)
    except QuadratureException as error:
        _LOGGER.warning("Row %s theta=%r failed: %s", e, theta, error)
        return ProofRow(theta=theta, failure=str(error))

    spread = max(abs(f_x.value - f_y.value), abs(f_x.value - f_r.value))
    allowance = max(grid.spread_tol, 2.0 * (f_x.error_estimate + f_y.error_estimate + f_r.error_estimate))
    return ProofRow(
        theta=theta,
        lhs=lhs.value,
        rhs=rhs,
        margin=rhs - lhs.value,
        error_estimate=lhs.error_estimate,
        f_x=f_x.value,
        f_y=f_y.value,
        f_from_r=f_r.value,
        spread=spread,
        spread_allowance=allowance,
        bound_margin=f_bound(e) - f_x.value,
        chain_margin=bound_chain_margin(e, theta),
        f_second=None if second is None else second.value,
    )


def _endpoint_row(grid: ProofGrid, theta: float, cp_factor: float) -> ProofRow:
    # At 0 and pi the scaled Schur inequality F(theta) <= (C_p / 2) cos^{p-1}(pi/2p - theta/p) holds with equality.
    e = grid.p
    try:
        f_x = F_x(e, theta, grid.tol)
        f_y = F_y(e, theta, grid.tol)
    except QuadratureException as error:
        _LOGGER.warning("Endpoint row %s theta=%r failed: %s", e, theta, error)
        return ProofRow(theta=theta, endpoint=True, failure=str(error))

    rhs = endpoint_rhs(e, theta, cp_factor)
    return ProofRow(
        theta=theta,
        lhs=f_x.value,
        rhs=rhs,
        margin=rhs - f_x.value,
        error_estimate=f_x.error_estimate,
        f_x=f_x.value,
        f_y=f_y.value,
        spread=abs(f_x.value - f_y.value),
        spread_allowance=max(grid.spread_tol, 2.0 * (f_x.error_estimate + f_y.error_estimate)),
        bound_margin=f_bound(e) - f_x.value,
        chain_margin=bound_chain_margin(e, theta),
        endpoint=True,
    )


def chord_gap(thetas: list[float], values: list[float]) -> Optional[float]:
    """
    Smallest gap between the chord through two neighbours and the middle
    sample. A convex function never lies above its chords, so the gap is
    non-negative for exact samples of a convex function on any grid.
    """
    if len(thetas) < 3:
        return None

    t = np.asarray(thetas)
    f = np.asarray(values)
    left = (t[2:] - t[1:-1]) / (t[2:] - t[:-2])
    chord = left * f[:-2] + (1.0 - left) * f[2:]
    return float(np.min(chord - f[1:-1]))


def run_proof(grid: ProofGrid, cp_factor: float = 1.0) -> VerificationReport:
    """
    Verify the proof on every grid angle and at both endpoints.

    ``cp_factor`` scales C_p in every Schur check; values below 1 must make
    the report fail, since the endpoint rows attain the inequality.
    """
    e = grid.p
    _LOGGER.info("Verifying %s on %d angles (tol %.1e, slack %.1e).", e, len(grid.thetas), grid.tol, grid.slack)

    with ThreadPoolExecutor(max_workers=worker_count()) as executor:
        interior = list(executor.map(lambda theta: _interior_row(grid, theta, cp_factor), grid.thetas))
        first, last = executor.map(lambda theta: _endpoint_row(grid, theta, cp_factor), (0.0, math.pi))

    rows = [first, *interior, last]
    failures = sum(1 for row in rows if row.failure is not None)

    margins = [margin for margin in (row.worst() for row in rows) if margin is not None]
    worst = min(margins) if margins else None

    sampled = [row for row in rows if row.f_x is not None]
    convexity = chord_gap([row.theta for row in sampled], [row.f_x for row in sampled])

    residuals: Optional[tuple[float, float]] = None
    bound = f_bound(e)
    if first.f_x is not None and last.f_x is not None:
        residuals = (first.f_x - bound, last.f_x - bound)

    passed = (
        failures == 0
        and worst is not None
        and worst >= -grid.slack
        and all(row.f_second > 0.0 for row in rows if row.f_second is not None)
        and (convexity is None or convexity >= -grid.slack)
        and residuals is not None
        and max(abs(residuals[0]), abs(residuals[1])) <= grid.slack
    )

    if passed:
        _LOGGER.info("%s verified: worst margin %.3e.", e, worst)
    else:
        _LOGGER.info("%s NOT verified: worst margin %s, %d numerical failures.", e, worst, failures)

    return VerificationReport(
        p=e.p,
        rows=rows,
        slack=grid.slack,
        worst_margin=worst,
        convexity_margin=convexity,
        endpoint_residuals=residuals,
        numerical_failures=failures,
        passed=passed,
    )
