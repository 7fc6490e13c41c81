import itertools
import sys

import pytest

from brf import BrfParams

GRID_EXPONENTS = (0.001, 0.3, 0.99)
PARAM_GRID = [BrfParams(1.0, a, b) for a, b in itertools.product(GRID_EXPONENTS, repeat=2)]


@pytest.fixture(params=PARAM_GRID, ids=lambda p: f"a{p.a}-b{p.b}")
def grid_params(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran."""
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS, key=int):
        terminalreporter.write_line(mod.RESULTS[key])
