import numpy as np
import pytest

from beamalign.channel import PathProfile
from beamalign.codebook import build_codebook
from beamalign.geometry import PositionMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def default_positions():
    return PositionMatrix.from_points((0, 0), [(50, 40), (45, -30)], (100, 0))


@pytest.fixture
def profile_a():
    return PathProfile([0.4, 0.3, 0.3])


@pytest.fixture
def cb8():
    return build_codebook(8, 8)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_report(request):
    """Collect one summary line per acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def report(line: str):
        print(line)
        lines.append(line)

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
