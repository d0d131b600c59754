import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pipeclimb.geometry import Bend, Gravity, PipeNetwork, PipeSpec, Straight  # noqa: E402

PIPE_R = 137.9
BEND_R = 418.79


@pytest.fixture(scope="session")
def paper_network():
    return PipeNetwork(
        PipeSpec(PIPE_R),
        (
            Straight(550, Gravity.VERTICAL),
            Bend(BEND_R, 90, "elbow"),
            Straight(350, Gravity.HORIZONTAL),
            Bend(BEND_R, 180, "u-section"),
            Straight(150, Gravity.HORIZONTAL),
        ),
    )


@pytest.fixture(scope="session")
def elbow_network():
    return PipeNetwork(PipeSpec(PIPE_R), (Straight(300), Bend(BEND_R, 90, "elbow"), Straight(300)))


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; call with (number, passed, detail) before asserting."""

    def record(number, passed, detail):
        _ACCEPTANCE.append(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
