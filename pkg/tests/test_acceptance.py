"""Acceptance battery: every criterion at its stated tolerance, one line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
pass/fail lines; the same battery backs the ``hankellift --command suite``
CLI entry point.
"""

import pytest

from hankellift.suite import CRITERIA, run_criterion


@pytest.mark.parametrize("index,name", [(idx, name) for idx, name, _ in CRITERIA])
def test_criterion(index, name):
    result = run_criterion(index)
    print(result.line())
    assert result.passed, result.line()
