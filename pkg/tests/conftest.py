import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dimerkit.corpus import load  # noqa: E402
from dimerkit.model import torus_cover  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def hexq():
    return load("corpus:hex")


@pytest.fixture
def conifold():
    return load("corpus:conifold")


@pytest.fixture
def fig1():
    return load("corpus:fig1")


def corpus_and_covers():
    out = []
    for name in ("hex", "conifold", "fig1"):
        q = load(f"corpus:{name}")
        out += [(name, q), (f"{name}-2x1", torus_cover(q, 2, 1)), (f"{name}-2x2", torus_cover(q, 2, 2))]
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
