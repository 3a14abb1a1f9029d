"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test prints a single PASS/FAIL line (visible with ``pytest -s`` or in
the ``-v`` summary on failure). The last entry is the counterexample watch.
"""

from __future__ import annotations

import pytest

from syzlab.acceptance import CHECKS, run_check


@pytest.mark.parametrize("number", [c[0] for c in CHECKS], ids=[f"criterion{c[0]}" if c[0] <= 10 else "watch" for c in CHECKS])
def test_criterion(number):
    res = run_check(number)
    print(res.line())
    assert res.passed, res.line()
