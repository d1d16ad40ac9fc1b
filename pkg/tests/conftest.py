import sys

import mpmath
import pytest
from hypothesis import settings

settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")


@pytest.fixture(autouse=True)
def _reset_precision():
    # tests may set mp.dps; keep them isolated
    dps = mpmath.mp.dps
    yield
    mpmath.mp.dps = dps


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
