import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from splinterlab.encodings import TSP, AP  # noqa: E402
from splinterlab.polyhedra import facet_normals, solution_set  # noqa: E402


@pytest.fixture(scope="session")
def tsp3_faces():
    return {s: facet_normals(solution_set(TSP, 3, s)) for s in range(6)}


@pytest.fixture(scope="session")
def tsp4_faces():
    return {s: facet_normals(solution_set(TSP, 4, s)) for s in range(24)}


@pytest.fixture(scope="session")
def ap3_faces():
    return {s: facet_normals(solution_set(AP, 3, s)) for s in range(6)}
