"""
    Sharp constants
    ===============

    Closed-form constants of the harmonic Riesz-Fejer inequality and the
    special functions behind the endpoint identity F(0) = F(pi).

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import math

import numpy as np
from pydantic import ValidationError
from scipy.special import gammaln

from hardy_sharp.helpers import ExponentException
from hardy_sharp.models import Exponent, SharpConstants


def make_exponent(p: float | Exponent) -> Exponent:
    if isinstance(p, Exponent):
        return p

    try:
        return Exponent(p=p)
    except ValidationError:
        raise ExponentException(f"Exponent must satisfy 1 < p < inf, got p={p}.")


def sharp_constant(e: Exponent) -> float:
    """K_p = 1 / (2 cos^p(pi / 2p)), the constant for the raw measure d(theta)"""
    return 1.0 / (2.0 * math.cos(e.half_angle) ** e.p)


def schur_constant(e: Exponent) -> float:
    """C_p = pi / cos^p(pi / 2p), the Schur target on the normalized circle"""
    # Same quantity as 2*pi*K_p; computed that way so the two agree to the last bit.
    return 2.0 * math.pi * sharp_constant(e)


def f_bound(e: Exponent) -> float:
    """B_p = pi / (2 cos(pi / 2p)), the common value F(0) = F(pi)"""
    return math.pi / (2.0 * math.cos(e.half_angle))


def sharp_constants(e: Exponent) -> SharpConstants:
    return SharpConstants(kp=sharp_constant(e), cp=schur_constant(e), bp=f_bound(e))


def log_gamma(x: float) -> float:
    if not (math.isfinite(x) and x > 0):
        raise ExponentException(f"log_gamma needs a positive finite argument, got {x}.")

    return float(gammaln(x))


def beta(a: float, b: float) -> float:
    """B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b) for a, b > 0"""
    if not (math.isfinite(a) and math.isfinite(b) and a > 0 and b > 0):
        raise ExponentException(f"beta needs positive finite arguments, got ({a}, {b}).")

    return float(np.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b)))


def endpoint_beta_value(e: Exponent) -> float:
    """(1/2) B(1/2 - 1/2p, 1/2 + 1/2p), which must equal f_bound(e)"""
    return 0.5 * beta(0.5 - 0.5 * e.inv_p, 0.5 + 0.5 * e.inv_p)
