"""Acceptance gate: each criterion at its stated tolerance, one PASS/FAIL line apiece.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or ``python tests/test_acceptance.py``.
"""

import sys

import pytest

from spinwalk import validation

LINES = {}


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(validation.CRITERIA))
def test_criterion(number):
    res = validation.CRITERIA[number]()
    line = validation.summary_line(res)
    LINES[number] = line
    print(line)
    assert res.passed, line


if __name__ == "__main__":
    results = validation.run()
    for res in results:
        print(validation.summary_line(res))
    sys.exit(0 if all(r.passed for r in results) else 1)
