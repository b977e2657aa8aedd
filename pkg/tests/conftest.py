import logging

import pytest

from cwsphere.numkit import make_rng

log = logging.getLogger("cwsphere.tests")

SEED = 20240611

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture
def rng(request):
    seed = SEED + sum(map(ord, request.node.name)) % 10_000
    log.info("seed for %s: %d", request.node.name, seed)
    return make_rng(seed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
