"""
    Shared fixtures
    ===============

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import pytest

from hardy_sharp.constants import make_exponent
from hardy_sharp.models import Exponent

P_GRID = (1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0)
# Subset used by the default (fast) run; the full grid is exercised by the slow tests.
P_SPOTS = (1.1, 1.5, 2.0, 4.0, 16.0)
TOL = 1e-10
SLACK = 1e-8


@pytest.fixture
def two() -> Exponent:
    return make_exponent(2.0)


@pytest.fixture(params=P_GRID, ids=lambda p: f"p={p:g}")
def exponent(request: pytest.FixtureRequest) -> Exponent:
    return make_exponent(request.param)


@pytest.fixture(params=P_SPOTS, ids=lambda p: f"p={p:g}")
def spot_exponent(request: pytest.FixtureRequest) -> Exponent:
    return make_exponent(request.param)
