"""
    Poisson extension
    =================

    The Poisson kernel, the extension operator T (boundary data to the
    diameter, normalized measure d(theta)/2pi), its adjoint T* (plain dr on
    [-1, 1]) and the certificate function h(z) = Re(1 - z^2)^(-1/p).

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import math
import logging

import numpy as np

from dataclasses import dataclass, field
from typing import Callable, Final, Iterable, Optional

from hardy_sharp.helpers import ExponentException
from hardy_sharp.models import Exponent
from hardy_sharp.quadrature import (
    DEFAULT_TOL,
    OffsetIntegrand,
    QuadratureResult,
    SingularityHint,
    integrate,
)

_LOGGER: Final = logging.getLogger(__name__)

TWO_PI: Final = 2.0 * math.pi


@dataclass(frozen=True)
class BoundaryFunction:
    """
    Boundary data f* on the unit circle.

    ``hints`` locate the integrable singularities (theta coordinates);
    ``near(anchor, offset)`` optionally evaluates f* at anchor + offset
    without rounding the angle, for use next to those singularities.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    hints: tuple[SingularityHint, ...] = ()
    near: Optional[OffsetIntegrand] = None
    name: str = "boundary"

    def __call__(self, theta: np.ndarray | float) -> np.ndarray:
        return self.evaluate(np.asarray(theta, dtype=float))

    def rotated(self, s: float) -> "BoundaryFunction":
        """Boundary data of z -> f(z e^{is}), i.e. theta -> f*(theta + s)"""
        if s == 0.0:
            return self

        def evaluate(theta: np.ndarray) -> np.ndarray:
            return self.evaluate(np.mod(theta + s, TWO_PI))

        # Rotated hint location -> original location, so the offset evaluator keeps its exact anchors.
        origins: dict[float, float] = {}
        for hint in self.hints:
            origins.setdefault(float(np.mod(np.mod(hint.location, TWO_PI) - s, TWO_PI)), hint.location)
        if 0.0 in origins:
            origins[TWO_PI] = origins[0.0]
        exponents = {hint.location: hint.exponent for hint in self.hints}
        hints = tuple(SingularityHint(location, exponents[origin]) for location, origin in sorted(origins.items()))

        near = None
        if self.near is not None:
            inner = self.near

            def near(anchor: float, offset: np.ndarray) -> np.ndarray:
                origin = origins.get(anchor)
                return inner(float(np.mod(anchor + s, TWO_PI)) if origin is None else origin, offset)

        return BoundaryFunction(evaluate=evaluate, hints=hints, near=near, name=f"{self.name} rotated by {s:g}")


@dataclass(frozen=True)
class TrigPolynomial:
    """a0 + sum_n (a_n cos n theta + b_n sin n theta), n = 1..N"""

    a0: float
    cos_coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    sin_coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self) -> None:
        cos_coeffs = np.array(self.cos_coeffs, dtype=float).reshape(-1)
        sin_coeffs = np.array(self.sin_coeffs, dtype=float).reshape(-1)
        if cos_coeffs.shape != sin_coeffs.shape:
            raise ValueError("cosine and sine coefficient arrays must have the same length")
        if not (math.isfinite(self.a0) and np.all(np.isfinite(cos_coeffs)) and np.all(np.isfinite(sin_coeffs))):
            raise ValueError("coefficients must be finite")

        cos_coeffs.setflags(write=False)
        sin_coeffs.setflags(write=False)
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "cos_coeffs", cos_coeffs)
        object.__setattr__(self, "sin_coeffs", sin_coeffs)

    @property
    def degree(self) -> int:
        return int(self.cos_coeffs.size)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.to_vector()))

    def is_zero(self) -> bool:
        return not np.any(self.to_vector())

    def to_vector(self) -> np.ndarray:
        return np.concatenate(([self.a0], self.cos_coeffs, self.sin_coeffs))

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "TrigPolynomial":
        vector = np.asarray(vector, dtype=float)
        if vector.size % 2 != 1:
            raise ValueError("coefficient vector must have odd length 2N + 1")
        degree = (vector.size - 1) // 2
        return cls(vector[0], vector[1 : degree + 1], vector[degree + 1 :])

    def boundary(self, theta: np.ndarray | float) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if self.degree == 0:
            return np.full(theta.shape, self.a0)
        n = np.arange(1, self.degree + 1)
        angles = np.multiply.outer(theta, n)
        return self.a0 + np.cos(angles) @ self.cos_coeffs + np.sin(angles) @ self.sin_coeffs

    def extension(self, r: float, theta: float = 0.0) -> float:
        """Harmonic extension a0 + sum r^n (a_n cos n theta + b_n sin n theta)"""
        n = np.arange(1, self.degree + 1)
        radial = r**n
        return float(self.a0 + np.sum(radial * (self.cos_coeffs * np.cos(n * theta) + self.sin_coeffs * np.sin(n * theta))))

    def on_segment(self, r: np.ndarray | float) -> np.ndarray:
        """Harmonic extension along the real diameter, a polynomial in r"""
        return np.polynomial.polynomial.polyval(r, np.concatenate(([self.a0], self.cos_coeffs)))

    def scaled(self, factor: float) -> "TrigPolynomial":
        return TrigPolynomial(factor * self.a0, factor * self.cos_coeffs, factor * self.sin_coeffs)

    def rotated(self, s: float) -> "TrigPolynomial":
        """Coefficients of theta -> f*(theta + s)"""
        n = np.arange(1, self.degree + 1)
        cos_ns, sin_ns = np.cos(n * s), np.sin(n * s)
        return TrigPolynomial(
            self.a0,
            self.cos_coeffs * cos_ns + self.sin_coeffs * sin_ns,
            self.sin_coeffs * cos_ns - self.cos_coeffs * sin_ns,
        )

    def as_boundary(self) -> BoundaryFunction:
        return BoundaryFunction(evaluate=self.boundary, name=f"trig polynomial of degree {self.degree}")


def _check_radius(r: float) -> None:
    if not abs(r) < 1.0:
        raise ExponentException(f"Radius must satisfy |r| < 1, got {r}.")


def poisson_kernel(r: float, theta: np.ndarray | float) -> np.ndarray | float:
    """(1 - r^2) / (1 - 2 r cos(theta) + r^2)"""
    _check_radius(r)
    # 1 - 2r cos(theta) + r^2 = (1 - r)^2 + 4r sin^2(theta/2), without cancellation near theta = 0.
    denominator = (1.0 - r) ** 2 + 4.0 * r * np.sin(0.5 * np.asarray(theta, dtype=float)) ** 2
    kernel = (1.0 - r * r) / denominator
    return float(kernel) if np.ndim(kernel) == 0 else kernel


def one_minus_square(anchor: float, offset: np.ndarray) -> np.ndarray:
    """1 - x^2 at x = anchor + offset, exact in the distance when anchor is +-1"""
    if anchor == 1.0:
        distance = -offset
        return distance * (2.0 - distance)
    if anchor == -1.0:
        return offset * (2.0 - offset)
    x = anchor + offset
    return (1.0 - x) * (1.0 + x)


def extend(f: BoundaryFunction, r: float, tol: float = DEFAULT_TOL) -> QuadratureResult:
    """T f*(r) = (1/2pi) int_0^{2pi} P(r, theta) f*(theta) d(theta)"""
    _check_radius(r)
    # The kernel peaks at theta = pi for r < 0.
    hints = (*f.hints, SingularityHint(math.pi))

    if f.near is not None:
        boundary_near = f.near

        def near(anchor: float, offset: np.ndarray) -> np.ndarray:
            return poisson_kernel(r, anchor + offset) * boundary_near(anchor, offset)

        result = integrate(None, 0.0, TWO_PI, TWO_PI * tol, hints, near=near)
    else:

        def integrand(theta: np.ndarray) -> np.ndarray:
            return poisson_kernel(r, theta) * f(theta)

        result = integrate(integrand, 0.0, TWO_PI, TWO_PI * tol, hints)

    return result.scaled(1.0 / TWO_PI)


def adjoint(
    g: Callable[[np.ndarray], np.ndarray],
    theta: float,
    g_hints: Iterable[SingularityHint] = (),
    tol: float = DEFAULT_TOL,
    *,
    g_near: Optional[OffsetIntegrand] = None,
) -> QuadratureResult:
    """T* g(theta) = int_{-1}^{1} P(r, theta) g(r) dr"""
    if math.remainder(theta, TWO_PI) == 0.0:
        raise ExponentException("The adjoint is unbounded at theta = 0 (mod 2pi).")

    center = math.cos(theta)
    sin_squared = math.sin(theta) ** 2

    def near(anchor: float, offset: np.ndarray) -> np.ndarray:
        # 1 - 2r cos(theta) + r^2 = (r - cos(theta))^2 + sin^2(theta)
        distance = offset if anchor == center else (anchor - center) + offset
        kernel = one_minus_square(anchor, offset) / (distance * distance + sin_squared)
        values = g_near(anchor, offset) if g_near is not None else g(anchor + offset)
        return kernel * values

    hints = (*g_hints, SingularityHint(center))
    return integrate(None, -1.0, 1.0, tol, hints, near=near)


def _re_power_on_circle(q: float, theta: np.ndarray | float) -> np.ndarray:
    """Re(1 - e^{2i theta})^(-q) = (2|sin theta|)^(-q) cos(q (pi/2 - (theta mod pi)))"""
    theta = np.asarray(theta, dtype=float)
    reduced = np.mod(theta, math.pi)
    return (2.0 * np.abs(np.sin(theta))) ** (-q) * np.cos(q * (0.5 * math.pi - reduced))


def _re_power_near(q: float) -> OffsetIntegrand:
    def near(anchor: float, offset: np.ndarray) -> np.ndarray:
        k = round(anchor / math.pi)
        if abs(anchor - k * math.pi) <= 4.0 * math.ulp(max(abs(anchor), 1.0)):
            # Anchor stands for k*pi exactly; the data is even about every multiple of pi.
            distance = np.abs(offset)
            return (2.0 * np.sin(distance)) ** (-q) * np.cos(q * (0.5 * math.pi - distance))
        return _re_power_on_circle(q, anchor + offset)

    return near


def _check_power(q: float) -> None:
    if not 0.0 < q < 1.0:
        raise ExponentException(f"Power must satisfy 0 < q < 1, got {q}.")


def re_power_boundary(q: float, name: Optional[str] = None) -> BoundaryFunction:
    """Boundary data of Re(1 - z^2)^(-q); singular like |theta - k pi|^(-q)"""
    _check_power(q)
    hints = tuple(SingularityHint(location, -q) for location in (0.0, math.pi, TWO_PI))

    def evaluate(theta: np.ndarray) -> np.ndarray:
        return _re_power_on_circle(q, theta)

    return BoundaryFunction(evaluate=evaluate, hints=hints, near=_re_power_near(q), name=name or f"Re(1-z^2)^(-{q:g})")


def certificate(e: Exponent) -> BoundaryFunction:
    """Boundary data of the Schur certificate h(z) = Re(1 - z^2)^(-1/p)"""
    return re_power_boundary(e.inv_p, name=f"h[{e}]")


def h_boundary(e: Exponent, theta: np.ndarray | float) -> np.ndarray | float:
    theta_array = np.asarray(theta, dtype=float)
    if np.any(np.mod(theta_array, math.pi) == 0.0):
        raise ExponentException("h is infinite at theta = 0 and theta = pi.")

    values = _re_power_on_circle(e.inv_p, theta_array)
    return float(values) if values.ndim == 0 else values


def certificate_extension(e: Exponent, r: np.ndarray | float) -> np.ndarray | float:
    """Th(r) = (1 - r^2)^(-1/p) in closed form"""
    values = (1.0 - np.asarray(r, dtype=float) ** 2) ** (-e.inv_p)
    return float(values) if values.ndim == 0 else values


def re_power_interior(q: float, z: complex) -> float:
    """Re(1 - z^2)^(-q) under the principal branch; Re(1 - z^2) > 0 on the disk"""
    _check_power(q)
    z = complex(z)
    if not abs(z) < 1.0:
        raise ExponentException(f"Point must lie in the open unit disk, got {z}.")

    return float(np.real(np.power(1.0 - z * z, -q)))


def mean_value_check(e: Exponent, r: float, tol: float = DEFAULT_TOL) -> float:
    """Residual of T h(r) against the closed form (1 - r^2)^(-1/p)"""
    _check_radius(r)
    result = extend(certificate(e), r, tol)
    residual = result.value - float(certificate_extension(e, r))
    _LOGGER.debug("Mean value check %s r=%g: residual %.3e (%d evaluations).", e, r, residual, result.evaluations)
    return residual
