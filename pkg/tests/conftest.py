import sys
from pathlib import Path

import pytest

from scoda import Graph

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable


TRIANGLE_EDGES = [(0, 1), (1, 2), (0, 2)]
PATH4_EDGES = [(0, 1), (1, 2), (2, 3)]
STAR4_EDGES = [(0, 1), (0, 2), (0, 3)]
SQUARE_EDGES = [(0, 1), (1, 2), (2, 3), (0, 3)]
K4_MINUS_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]
K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

# two triangles {0,1,2} and {3,4,5} joined by the bridge (0, 3)
TWO_TRIANGLES_EDGES = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3)]


@pytest.fixture
def triangle():
    return Graph.from_edges(3, TRIANGLE_EDGES)


@pytest.fixture
def path4():
    return Graph.from_edges(4, PATH4_EDGES)


@pytest.fixture
def square():
    return Graph.from_edges(4, SQUARE_EDGES)


@pytest.fixture
def k4():
    return Graph.from_edges(4, K4_EDGES)


@pytest.fixture
def two_triangles():
    return Graph.from_edges(6, TWO_TRIANGLES_EDGES)
