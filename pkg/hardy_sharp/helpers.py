"""
    Hardy sharp helpers
    ===================

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import os

from typing import Optional


class HardySharpException(Exception):
    """
    Hardy sharp generic Exception
    """


class ExponentException(HardySharpException, ValueError):
    """
    A parameter is outside the range where the inequality is stated
    """


class QuadratureException(HardySharpException):
    """
    Numerical integration generic Exception
    """


class NonConvergence(QuadratureException):
    """
    Tolerance unreachable within the evaluation budget
    """


class DivergentHint(QuadratureException):
    """
    Singularity exponent makes the integral diverge
    """


class NonFinite(QuadratureException):
    """
    Integrand returned NaN or infinity away from the hinted points
    """


class ZeroFunction(HardySharpException):
    """
    The harmonic function is identically zero
    """


class SettingsException(HardySharpException):
    """
    Invalid run configuration file
    """


class UsageError(HardySharpException):
    """
    Invalid command line usage
    """


def get_default_value_from_env(env_var_name: str, default: Optional[bool | int | float | str] = None) -> Optional[bool | int | float | str]:
    value = os.environ.get(env_var_name, default)
    if value is not None and value == "":
        return None
    else:
        return value


def worker_count() -> int:
    """Number of worker threads for grid sweeps, capped by HARDY_SHARP_THREADS"""
    cap = get_default_value_from_env("HARDY_SHARP_THREADS")
    machine = os.cpu_count() or 1
    if cap is None:
        return machine

    try:
        threads = int(cap)
    except ValueError:
        raise UsageError(f"HARDY_SHARP_THREADS must be an integer, got {cap!r}.")
    if threads < 1:
        raise UsageError("HARDY_SHARP_THREADS must be at least 1.")

    return threads


def convert_to_float_list(param: str | float | int | list) -> list[float]:
    """Parse "1.5,2,4" (or a YAML list, or a single number) into floats"""
    if isinstance(param, str):
        items = [item.strip() for item in param.split(",") if item.strip()]
    elif isinstance(param, (list, tuple)):
        items = list(param)
    else:
        items = [param]

    try:
        return [float(item) for item in items]
    except (TypeError, ValueError):
        raise UsageError(f"Expected a comma separated list of numbers, got {param!r}.")
