import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from lassokit.schema import builtin_schema  # noqa: E402


@pytest.fixture(scope="session")
def grph():
    return builtin_schema("Grph")


@pytest.fixture(scope="session")
def rgrph():
    return builtin_schema("RGrph")


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
