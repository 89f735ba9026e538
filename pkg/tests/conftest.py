import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spotcheck import EconParams, build_model  # noqa: E402


@pytest.fixture
def base_model():
    """Prior 0.8 on A, graders correct with probability 0.9."""
    return build_model(0.8, 0.9, 0.9)


@pytest.fixture
def base_econ():
    return EconParams(cost=1.0, reward=25.0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1][1:])):
            terminalreporter.write_line(line)
