import numpy as np
import pytest

from dataset.generate import generate_ba, generate_er
from dataset.graph import Graph


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run the desk-scale reproductions')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip)


def graph_of(n, edges):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    return Graph.from_edges(n, edges[:, 0], edges[:, 1])


@pytest.fixture
def path3():
    return graph_of(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    return graph_of(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star():
    def make(leaves):
        return graph_of(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
    return make


@pytest.fixture
def cycle():
    def make(n):
        return graph_of(n, [(i, (i + 1) % n) for i in range(n)])
    return make


@pytest.fixture
def complete():
    def make(n):
        return graph_of(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    return make


@pytest.fixture
def small_ba():
    return generate_ba(300, 3, 7)


@pytest.fixture
def small_er():
    return generate_er(300, 6.0, 7)


@pytest.fixture
def lollipop():
    # K5 with a tail of three nodes, connected and irregular
    edges = [(i, j) for i in range(5) for j in range(i + 1, 5)] + [(4, 5), (5, 6), (6, 7)]
    return graph_of(8, edges)
