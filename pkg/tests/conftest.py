import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mdlbn import BayesNet, Dataset, Schema, Structure  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def xy_net():
    """X -> Y with P(X=1)=0.3, P(Y=1|X=1)=0.9, P(Y=1|X=0)=0.2."""
    schema = Schema(("X", "Y"), (2, 2))
    st = Structure.from_edges(schema, [(0, 1)])
    return BayesNet(st, (np.array([0.7, 0.3]), np.array([[0.8, 0.2], [0.1, 0.9]])))


@pytest.fixture
def four_rows():
    schema = Schema(("X", "Y"), (2, 2))
    return Dataset(schema, [(0, 0), (0, 1), (0, 0), (1, 1)])


@pytest.fixture
def uniform_rows():
    schema = Schema(("X", "Y"), (2, 2))
    return Dataset(schema, [(0, 0), (0, 1), (1, 0), (1, 1)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
