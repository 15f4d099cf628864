#!/usr/bin/env python3
"""
Shared pytest fixtures: catalog surfaces and a seeded random generator.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from src.surfaces.surface_def import parse_surface


@pytest.fixture(scope="session")
def torus():
    return parse_surface("builtin:torus?R=2,r=1")


@pytest.fixture(scope="session")
def cylinder():
    return parse_surface("builtin:cylinder?R=2")


@pytest.fixture(scope="session")
def sphere():
    return parse_surface("builtin:sphere?R=1")


@pytest.fixture(scope="session")
def catenoid():
    return parse_surface("builtin:catenoid")


@pytest.fixture(scope="session")
def sheared_cylinder():
    return parse_surface("builtin:sheared_cylinder?R=2,c=0.5")


@pytest.fixture(scope="session")
def graph():
    return parse_surface("builtin:graph")


@pytest.fixture(scope="session")
def unduloid():
    return parse_surface("builtin:unduloid")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_points(surface, rng, count, margin=0.05):
    """Uniform samples kept a relative margin away from the domain edges"""
    x0, x1, y0, y1 = surface.domain.as_tuple()
    dx, dy = margin * (x1 - x0), margin * (y1 - y0)
    xs = rng.uniform(x0 + dx, x1 - dx, count)
    ys = rng.uniform(y0 + dy, y1 - dy, count)
    return list(zip(xs.tolist(), ys.tolist()))
