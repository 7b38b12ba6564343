"""
Shared fixtures for ctxlab tests
"""
import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from ctxlab.scenario import Scenario, cycle_scenario  # noqa: E402
from ctxlab.semiring import Kind  # noqa: E402
from ctxlab.simpdist import SimpDist, deterministic, matrix_from_rows, mixture  # noqa: E402

from builders import chsh_box  # noqa: E402

settings.register_profile("ci", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))

A_ROWS = [[1, 1], [1, 0]]
B_ROWS = [[1, 1], [0, 1]]
D_ROWS = [[0, 1], [1, 1]]


@pytest.fixture
def chsh() -> SimpDist:
    """PR box on the 4-cycle with one p₋ edge"""
    return chsh_box()


@pytest.fixture
def abcdu_scenario() -> Scenario:
    return Scenario.build(
        ["x", "y", "z", "w"],
        [("s1", "x", "z"), ("s2", "z", "w"), ("s3", "w", "x"), ("s4", "x", "y"), ("s5", "x", "y")],
    )


@pytest.fixture
def abcdu(abcdu_scenario: Scenario) -> SimpDist:
    """Boolean distribution with edge patterns A, D, B, D, B"""
    rows = {"s1": A_ROWS, "s2": D_ROWS, "s3": B_ROWS, "s4": D_ROWS, "s5": B_ROWS}
    matrices = {e: matrix_from_rows(r, Kind.BOOLEAN) for e, r in rows.items()}
    return SimpDist.create(abcdu_scenario, 2, matrices, kind=Kind.BOOLEAN)


@pytest.fixture
def square() -> Scenario:
    return cycle_scenario(4)


@pytest.fixture
def two_deterministic_mix(square: Scenario) -> SimpDist:
    """½δ^φ + ½δ^ψ on the 4-cycle"""
    phi = deterministic(square, {"v0": 0, "v1": 0, "v2": 0, "v3": 0}, 2)
    psi = deterministic(square, {"v0": 1, "v1": 0, "v2": 1, "v3": 1}, 2)
    return mixture([(Fraction(1, 2), phi), (Fraction(1, 2), psi)])
