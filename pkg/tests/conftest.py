import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from ncpoly.poly_numeric import ComplexPoly, Rectangle  # noqa: E402

DEG5 = ComplexPoly([1, (-17 + 6j) / 4, (73 - 63j) / 15, (34 - 12j) / 25, (-308 + 252j) / 125, 0])
DEG5_RECT = Rectangle(-10, 5, -9, 2)


@pytest.fixture(scope="session")
def deg5():
    return DEG5


@pytest.fixture(scope="session")
def deg5_analysis():
    from ncpoly.monodromy import RectangleAnalysis
    return RectangleAnalysis(DEG5, DEG5_RECT)


# acceptance results are collected here and summarized at the end of the run
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
