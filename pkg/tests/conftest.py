import json
import sys
from pathlib import Path

import pytest

ORACLE_FILE = Path(__file__).parent / "oracles" / "oracle_values.json"


@pytest.fixture(scope="session")
def oracle():
    """Reference values frozen by tests/oracles/compute_oracles.py (mpmath, 40 digits)."""
    return json.loads(ORACLE_FILE.read_text())


def rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
