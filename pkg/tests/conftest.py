import random
import sys
from pathlib import Path

import numpy as np
import pytest

from galoisph.pmod import PersistenceModule
from galoisph.poset import Interval, build_poset

DATA = Path(__file__).parent / "data"


def example_poset():
    return build_poset("abcd", [("a", "b"), ("b", "c"), ("b", "d")])


def example_module(p=2):
    P = example_poset()
    pi = np.hstack([np.eye(3, dtype=np.int64), np.zeros((3, 1), dtype=np.int64)])
    theta = np.array([[1, 0, 0]])
    return PersistenceModule(P, {"a": 4, "b": 3, "c": 1, "d": 0},
                             {("a", "b"): pi, ("b", "c"): theta}, p)


def iv(lo, hi):
    return Interval(lo, hi)


def bar_module(chain_poset, lo, hi, p=2):
    """Interval module k on [lo, hi) of a chain."""
    dims = {x: int(lo <= x < hi) for x in chain_poset.elements}
    edges = {(x, y): np.ones((dims[y], dims[x]), dtype=np.int64) for x, y in chain_poset.hasse}
    return PersistenceModule(chain_poset, dims, edges, p)


@pytest.fixture
def P():
    return example_poset()


@pytest.fixture
def M():
    return example_module()


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def data():
    return DATA


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
