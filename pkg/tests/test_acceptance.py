"""One pass/fail line per acceptance criterion.

The lines are collected in ``LINES`` and printed in the terminal summary
by ``conftest.py``, so they show up without ``-s``.
"""
import pytest

from shortprimes import acceptance

LINES: dict[int, str] = {}


def _run(number, **kw):
    res = acceptance.run_criterion(number, **kw)
    LINES[number] = res.line()
    assert res.passed, res.line()


@pytest.mark.parametrize("number", [n for n, (_, _, slow) in acceptance.CRITERIA.items() if not slow])
def test_criterion(number):
    _run(number)


@pytest.mark.slow
def test_criterion_9(large_table):
    _run(9, large_table=large_table.source)
