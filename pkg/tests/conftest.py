import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corrnet.filtration import FilteredGraph  # noqa: E402

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[7:9])):
            terminalreporter.write_line(line)


def random_graph(rng, n, p):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return edges


def as_filtered(n, edges):
    symbols = [f"v{i:02d}" for i in range(n)]
    return FilteredGraph.from_edges(symbols, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
