import itertools

import pytest
from hypothesis import HealthCheck, settings

from fuzzyspec.clifford import Signature

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

D2 = [Signature(2, 0), Signature(1, 1), Signature(0, 2)]
D4 = [Signature(p, 4 - p) for p in range(4, -1, -1)]
SMALL = [Signature(p, q) for p, q in itertools.product(range(5), repeat=2) if 1 <= p + q <= 4]


@pytest.fixture(params=D2, ids=str)
def sig2(request):
    return request.param


@pytest.fixture(params=D4, ids=str)
def sig4(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            lines.extend(v for k, v in rep.user_properties if k == "acceptance")
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("]")[0].split("[")[1])):
            terminalreporter.write_line(line)
