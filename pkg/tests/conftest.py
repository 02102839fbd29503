from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from utils.graph_core import Graph
from utils.sat_reduction import load_instance

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def sample6():
    return load_instance((DATA_DIR / "sample6.cnf").read_text())


@pytest.fixture
def unsat4():
    return load_instance((DATA_DIR / "unsat4.cnf").read_text())


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def theta() -> Graph:
    return Graph.from_edges(5, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])


@pytest.fixture
def subdivided_claw() -> Graph:
    # center 0, middles 1..3, leaves 4..6
    return Graph.from_edges(7, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)])
