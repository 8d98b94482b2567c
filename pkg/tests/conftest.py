import random

import numpy as np
import pytest

from conesurf import geom
from conesurf.builders import dual_spanning_tree, reference_models
from conesurf.development import reverse_steps
from conesurf.loops import DualLoop, DualStep


@pytest.fixture(scope="session")
def models():
    return reference_models()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def _restore_tol():
    tol = geom.get_tol()
    yield
    geom.set_tol(tol)


def random_walk(s, start, length, rnd):
    steps, cur = [], start
    for _ in range(length):
        k = rnd.randrange(3)
        steps.append(DualStep(cur, k))
        cur = s.partner((cur, k)).triangle
    return tuple(steps), cur


def random_loop(s, base, rnd, max_len=12):
    """A random walk from ``base`` closed up along the dual spanning tree."""
    paths, _ = dual_spanning_tree(s, base)
    steps, end = random_walk(s, base, rnd.randint(1, max_len), rnd)
    return DualLoop(base, steps + reverse_steps(s, paths[end]))


@pytest.fixture
def pyrandom():
    return random.Random(7)


# -- acceptance summary ------------------------------------------------------

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        prev = _acceptance.get(name, "PASS")
        _acceptance[name] = "FAIL" if report.failed or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
