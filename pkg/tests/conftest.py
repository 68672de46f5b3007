import os
import sys
from pathlib import Path

import pytest

from shortprimes import acceptance, zeros

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def table():
    return zeros.load_zeros(zeros.bundled_table_path())


@pytest.fixture(scope="session")
def large_table():
    p = Path(os.environ.get(acceptance.LARGE_TABLE_ENV, ROOT / acceptance.DEFAULT_LARGE_TABLE))
    if not p.exists():
        pytest.skip(f"no 10^5-zero table at {p}; set {acceptance.LARGE_TABLE_ENV}")
    return zeros.load_zeros(p)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[number])
    missing = sorted(set(acceptance.CRITERIA) - set(mod.LINES))
    for number in missing:
        terminalreporter.write_line(f"[SKIP] criterion {number:2d} {acceptance.CRITERIA[number][0]}: not run")
