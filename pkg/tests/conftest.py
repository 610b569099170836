import random

import pytest

from cat0cube.complex import all_cells, make_point
from cat0cube.pip import Pip


def sq():
    return Pip(["a", "b"])


def lp():
    return Pip(["a", "b"], [], [("a", "b")])


def ch():
    return Pip(["a", "b"], [("a", "b")], [])


def bk():
    return Pip(["a", "b", "c"], [], [("b", "c")])


@pytest.fixture
def SQ():
    return sq()


@pytest.fixture
def LP():
    return lp()


@pytest.fixture
def CH():
    return ch()


@pytest.fixture
def BK():
    return bk()


def random_point(p, rng: random.Random, grid: int | None = None):
    """Uniform-ish point: random cell, then random free coordinates.

    With ``grid`` set, free coordinates are multiples of ``1/grid``.
    """
    cell = rng.choice(all_cells(p))
    x = [0.0] * len(p)
    for i in cell.I:
        x[i] = 1.0
    for i in cell.M:
        if grid:
            x[i] = rng.randint(0, grid) / grid
        else:
            x[i] = rng.random()
    return tuple(x)


def random_orthant_instance(rng: random.Random, max_side=4, max_common=2, density=0.5):
    """Local points ``x, y`` and a compatibility predicate on keys a*, b*, c*."""
    na = rng.randint(0, max_side)
    nb = rng.randint(0, max_side)
    nc = rng.randint(0, max_common)
    A = [f"a{i}" for i in range(na)]
    B = [f"b{i}" for i in range(nb)]
    C = [f"c{i}" for i in range(nc)]
    bad = {(a, b) for a in A for b in B if rng.random() < density}
    x = {k: rng.uniform(0.05, 1.0) for k in A + C}
    y = {k: rng.uniform(0.05, 1.0) for k in B + C}

    def compat(d1, d2):
        return (d1, d2) not in bad and (d2, d1) not in bad

    return x, y, compat


def point(p, **coords):
    return make_point(p, coords)


# acceptance lines collected during the session, echoed in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
