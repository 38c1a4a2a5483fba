"""
    Hardy sharp data models
    =======================

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Literal, Optional


Command = Literal["constants", "schur", "convexity", "endpoints", "ratio-sweep", "epsilon-sweep", "maximize", "selftest"]


def _check_exponent(p: float) -> float:
    if not math.isfinite(p) or p <= 1.0:
        raise ValueError(f"exponent must satisfy 1 < p < inf, got {p}")
    return p


class Exponent(BaseModel):
    """Validated exponent 1 < p < inf of the harmonic Hardy space."""

    model_config = ConfigDict(frozen=True)

    p: float

    @field_validator("p")
    @classmethod
    def check_p(cls, p: float) -> float:
        return _check_exponent(p)

    @property
    def inv_p(self) -> float:
        return 1.0 / self.p

    @property
    def half_angle(self) -> float:
        """pi / (2p), strictly inside (0, pi/2)"""
        return math.pi / (2.0 * self.p)

    def __str__(self) -> str:
        return f"p={self.p:g}"


class SharpConstants(BaseModel):
    model_config = ConfigDict(frozen=True)

    kp: float
    cp: float
    bp: float


class ProofGrid(BaseModel):
    """Angles in (0, pi) on which the proof steps are verified."""

    model_config = ConfigDict(frozen=True)

    p: Exponent
    thetas: tuple[float, ...]
    tol: float = Field(default=1e-10, gt=0)
    slack: float = Field(default=1e-8, ge=0)
    spread_tol: float = Field(default=1e-7, gt=0)
    convexity_delta: float = Field(default=0.01, gt=0, lt=math.pi / 2)

    @field_validator("thetas")
    @classmethod
    def check_thetas(cls, thetas: tuple[float, ...]) -> tuple[float, ...]:
        if len(thetas) == 0:
            raise ValueError("grid must contain at least one angle")
        if any(not 0.0 < theta < math.pi for theta in thetas):
            raise ValueError("grid angles must lie strictly inside (0, pi)")
        if any(left >= right for left, right in zip(thetas, thetas[1:])):
            raise ValueError("grid angles must be sorted ascending without repetition")
        return thetas


class ProofRow(BaseModel):
    theta: float
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    margin: Optional[float] = None
    error_estimate: Optional[float] = None
    f_x: Optional[float] = None
    f_y: Optional[float] = None
    f_from_r: Optional[float] = None
    spread: Optional[float] = None
    spread_allowance: Optional[float] = None
    bound_margin: Optional[float] = None
    chain_margin: Optional[float] = None
    f_second: Optional[float] = None
    endpoint: bool = False
    failure: Optional[str] = None

    def worst(self) -> Optional[float]:
        """Smallest of the inequality margins carried by this row"""
        margins = [self.margin, self.bound_margin, self.chain_margin]
        if self.spread is not None and self.spread_allowance is not None:
            margins.append(self.spread_allowance - self.spread)
        margins = [m for m in margins if m is not None]
        return min(margins) if margins else None


class VerificationReport(BaseModel):
    p: float
    rows: list[ProofRow]
    slack: float
    worst_margin: Optional[float]
    convexity_margin: Optional[float] = None
    endpoint_residuals: Optional[tuple[float, float]] = None
    numerical_failures: int = 0
    passed: bool


class SampleSpec(BaseModel):
    """Deterministic family of random trigonometric polynomials."""

    model_config = ConfigDict(frozen=True)

    degree: int = Field(default=8, ge=0)
    count: int = Field(default=1000, gt=0)
    seed: int = Field(default=42, ge=0, lt=2**64)
    decay: float = Field(default=1.0, ge=0)


class RatioResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    lhs: float
    rhs_raw: float
    ratio: float
    normalized: float
    lhs_error: float = 0.0
    rhs_error: float = 0.0

    @property
    def normalized_error(self) -> float:
        """Error of the normalized ratio propagated from both integrals"""
        return abs(self.normalized) * (self.lhs_error / abs(self.lhs) + self.rhs_error / abs(self.rhs_raw))


class RunConfig(BaseModel):
    """Parsed and validated command line run."""

    command: Command
    p_grid: list[float] = Field(default_factory=lambda: [1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0], min_length=1)
    theta_points: int = Field(default=199, ge=3)
    tol: float = Field(default=1e-10, gt=0)
    slack: float = Field(default=1e-8, ge=0)
    samples: int = Field(default=1000, gt=0)
    degree: int = Field(default=8, ge=0)
    seed: int = Field(default=42, ge=0)
    budget: int = Field(default=50_000, ge=100)
    restarts: int = Field(default=1, gt=0)
    decay: float = Field(default=1.0, ge=0, allow_inf_nan=False)
    epsilons: list[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05, 0.02, 0.01], min_length=1)
    angle: float = Field(default=0.0, allow_inf_nan=False)
    format: Literal["csv", "json"] = "csv"
    output: Optional[str] = None

    @field_validator("p_grid")
    @classmethod
    def check_p_grid(cls, p_grid: list[float]) -> list[float]:
        return [_check_exponent(p) for p in p_grid]

    @model_validator(mode="after")
    def check_maximize_degree(self) -> "RunConfig":
        if self.command == "maximize" and self.degree < 1:
            raise ValueError("maximize needs degree >= 1")
        return self


class ReportSummary(BaseModel):
    passed: bool
    worst_margin: Optional[float] = None
    numerical_failures: int = 0


class ReportDocument(BaseModel):
    """JSON report: config echo, flat rows, summary."""

    config: RunConfig
    columns: list[str]
    rows: list[dict[str, float | int | str | bool | None]]
    summary: ReportSummary


class ConvexityRow(BaseModel):
    """F'' from the Phi integral against a central difference of F."""

    theta: float
    f2_phi: float
    f2_fd: float
    rel_diff: float
    error_estimate: float = 0.0


class SampleOutcome(BaseModel):
    index: int
    result: Optional[RatioResult] = None
    failure: Optional[str] = None


class OptimizationResult(BaseModel):
    """Best point of a simplex search; coefficients are the flat (a0, a_n, b_n) vector."""

    best: RatioResult
    coefficients: tuple[float, ...]
    evaluations: int
    exhausted: bool
    seed: int


class CheckOutcome(BaseModel):
    """One acceptance check of the self test; ``worst`` is the quantity compared against its threshold."""

    check: str
    passed: bool
    worst: Optional[float] = None
    failure: Optional[str] = None
