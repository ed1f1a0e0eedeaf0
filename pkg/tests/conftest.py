from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from clocus.polycore.field import RATIONALS, prime_field

settings.register_profile(
    "clocus",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("clocus")

ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def gf():
    return prime_field()


@pytest.fixture(scope="session")
def qq():
    return RATIONALS


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line[1])
