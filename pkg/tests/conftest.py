import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cfakit.core import Item, ScoreMatrix  # noqa: E402

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_matrix(values, systems=None, ids=None) -> ScoreMatrix:
    values = np.asarray(values, dtype=float)
    n, k = values.shape
    systems = systems or [chr(ord("A") + j) for j in range(k)]
    ids = ids or [f"d{i + 1}" for i in range(n)]
    return ScoreMatrix(tuple(Item(i) for i in ids), tuple(systems), values)


@pytest.fixture
def data_dir() -> Path:
    return DATA
