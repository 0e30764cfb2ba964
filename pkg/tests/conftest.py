import itertools
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cliqueclust import Graph


def complete(n, offset=0):
    return [(offset + i, offset + j) for i, j in itertools.combinations(range(n), 2)]


def complete_graph(n):
    return Graph(n, complete(n))


def disjoint_cliques(*sizes):
    edges, off = [], 0
    for k in sizes:
        edges += complete(k, off)
        off += k
    return Graph(off, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
