import os

import pytest

from pmc.lts import Lts

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "fixtures")


def fixture_path(*parts):
    return os.path.join(FIXTURES, *parts)


def lts(n, *trans, init=0):
    return Lts(n, init, frozenset(trans))


@pytest.fixture
def trio():
    from pmc.network import load_net
    return load_net(fixture_path("trio", "network.net"))


@pytest.fixture
def semaphore():
    from pmc.network import load_net
    return load_net(fixture_path("semaphore", "semaphore.net"))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
