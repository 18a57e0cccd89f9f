import json
from pathlib import Path

import pytest

from hassettkit import validate

DATA = Path(__file__).parent / "data"

M0_GRAM = [
    [3, 1, 0, 0, 0],
    [1, 3, 2, 0, 2],
    [0, 2, 6, 2, 0],
    [0, 0, 2, 4, 0],
    [0, 2, 0, 0, 4],
]
F0 = [[8, 6, 0, 6], [6, 18, 6, 0], [0, 6, 12, 0], [6, 0, 0, 12]]


@pytest.fixture
def m0():
    return validate(M0_GRAM)


@pytest.fixture
def k8():
    return validate([[3, 1], [1, 3]])


@pytest.fixture
def f0_lattice():
    return validate(F0)


@pytest.fixture
def data_dir():
    return DATA


def write_gram(path, gram):
    path.write_text(json.dumps({"rank": len(gram), "gram": gram}))
    return path


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
