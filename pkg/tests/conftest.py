import random

import pytest

from thincirc.core import SupportSet


@pytest.fixture
def rng():
    return random.Random(20111)


def random_support(rng, n, density=None):
    density = rng.random() if density is None else density
    return SupportSet(n, tuple(j for j in range(n) if rng.random() < density))


# one line per acceptance criterion, shown after the run
CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    def record(label, ok, detail=""):
        CRITERIA.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
