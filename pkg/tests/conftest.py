"""
Shared fixtures: small meshes and their Taylor-Hood spaces.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from acflow.fem.spaces import FeSpace, TaylorHood
from acflow.mesh import Disk, Rectangle, generate_mesh


@pytest.fixture(scope="session")
def unit_square():
    return generate_mesh(Rectangle((0.0, 1.0), (0.0, 1.0)), 0.25)


@pytest.fixture(scope="session")
def small_disk():
    return generate_mesh(Disk(1.0), 0.3, seed=0)


@pytest.fixture(scope="session")
def square_spaces(unit_square):
    return TaylorHood(unit_square)


@pytest.fixture(scope="session")
def disk_spaces(small_disk):
    return TaylorHood(small_disk)


@pytest.fixture(scope="session")
def square_p2(unit_square):
    return FeSpace(unit_square, 2)
