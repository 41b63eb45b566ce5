import sys
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


def pytest_runtest_logreport(report):
    """Print one pass/fail line per acceptance criterion."""
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" and report.passed:
        print(f"\nACCEPTANCE PASS: {name}", file=sys.stderr)
    elif report.when == "call" and report.failed:
        print(f"\nACCEPTANCE FAIL: {name}", file=sys.stderr)
    elif report.skipped:
        print(f"\nACCEPTANCE SKIP: {name}", file=sys.stderr)
