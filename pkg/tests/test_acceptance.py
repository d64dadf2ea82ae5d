"""Acceptance suite: one test per classification criterion.

Each criterion is exact (finite domains, no tolerances) and prints its own
pass/fail line so the suite output doubles as an acceptance report.  The
underlying checks live in gpdcov.selftest and are shared with the
``gpdcov selftest`` command.
"""

import pytest

from gpdcov.selftest import ACCEPTANCE_CHECKS


@pytest.mark.parametrize(
    "num,title,check",
    ACCEPTANCE_CHECKS,
    ids=[f"{num:02d}-{title.replace(' ', '-')}"
         for num, title, _ in ACCEPTANCE_CHECKS])
def test_acceptance(num, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        print(f"\n{status} {num:2d} {title}: {detail}", end="")
    assert ok, f"criterion {num} ({title}): {detail}"
