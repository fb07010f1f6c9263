import math
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from uniformize import catalog
from uniformize.angles import perturb_member, stereographic_subspace
from uniformize.flow import initial_angle_system
from uniformize.maps import WeightedMap
from uniformize.solver import maximize

settings.register_profile(
    "repro", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")

# name -> (map factory, uniform weight, stereographic face)
CASES = {
    "tetrahedron": (catalog.tetrahedron, math.pi / 3, 0),
    "cube": (catalog.cube, math.pi / 2, 0),
    "torus2x2": (catalog.torus_grid, math.pi / 2, None),
    "torus_tri": (catalog.torus_triangulation, math.pi / 3, None),
    "genus2": (catalog.genus2_triangulation, math.pi / 3, None),
}
SOLVED = list(CASES)


@lru_cache(maxsize=None)
def weighted(name):
    make, theta, _ = CASES[name]
    return WeightedMap.uniform(make(), theta)


@lru_cache(maxsize=None)
def start(name):
    return initial_angle_system(weighted(name), CASES[name][2])


@lru_cache(maxsize=None)
def solved(name):
    return maximize(weighted(name), start(name))


def stereo_of(name):
    face = CASES[name][2]
    return None if face is None else stereographic_subspace(weighted(name), face)


def random_member(name, seed, scale=0.3):
    rng = np.random.default_rng(seed)
    a0 = start(name)
    return a0.with_psi(perturb_member(weighted(name), a0, rng, scale=scale,
                                      stereo=stereo_of(name)))


@pytest.fixture(params=SOLVED)
def case(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    lines = getattr(pytest, "acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
