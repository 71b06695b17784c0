"""Acceptance suite: every named check at its stated tolerance.

Each result line is printed in the pytest terminal summary.
"""
import pytest

from compop.checks import CHECKS, run_check

ACCEPTANCE_LINES = []


@pytest.mark.parametrize("check_id", list(CHECKS))
def test_acceptance(check_id):
    res = run_check(check_id)
    ACCEPTANCE_LINES.append(res.line())
    print(res.line())
    assert res.passed, res.summary
