import pytest

from garland.complex import face_poset
from garland.generators import cube, torus_cubical, torus_simplicial
from garland.poset import build_garland

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def tbox():
    return face_poset(torus_cubical(4, 4))


@pytest.fixture(scope="session")
def tdelta():
    return face_poset(torus_simplicial(4, 4))


@pytest.fixture(scope="session")
def square():
    return face_poset(cube(2))


@pytest.fixture(scope="session")
def g_tbox(tbox):
    return build_garland(tbox, 1)


@pytest.fixture(scope="session")
def g_tdelta(tdelta):
    return build_garland(tdelta, 1)
