import random

import pytest
from hypothesis import strategies as st

from swarmhash import Point3
from swarmhash._kernels import BACKENDS

ACCEPTANCE_LINES: list[str] = []


def random_points(rng: random.Random, n: int, box: float) -> list[Point3]:
    return [Point3(i, rng.uniform(0, box), rng.uniform(0, box), rng.uniform(0, box))
            for i in range(n)]


# Coordinates on a 1/8 m lattice keep differences exact in binary floating
# point, which produces exact-threshold ties and exact translations.
lattice_coord = st.integers(-2400, 2400).map(lambda v: v / 8)


@st.composite
def point_sets(draw, min_size=0, max_size=40, coord=lattice_coord):
    coords = draw(st.lists(st.tuples(coord, coord, coord), min_size=min_size, max_size=max_size))
    return [Point3(i, x, y, z) for i, (x, y, z) in enumerate(coords)]


thresholds = st.sampled_from([12.5, 50.0, 100.0, 250.0])


@pytest.fixture(params=sorted(BACKENDS))
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
