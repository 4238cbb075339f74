"""Acceptance suite: every criterion at its stated tolerance.

Prints one pass/fail line per criterion.  `qinfo --check` runs the same
functions; this module is their pytest frontend.

Criterion 5 is expected red: its second documented closed form (2S - 1 for
the post-coding coherent information of the pipelining example) is
inconsistent with direct computation, which yields S - 1 via every
independent route tried.  The criterion is asserted as documented rather
than weakened; see the repository notes outside the package for the
analysis.
"""

import pytest

from qinfo.acceptance import CRITERIA


@pytest.mark.parametrize("name,check", CRITERIA, ids=[name for name, _ in CRITERIA])
def test_criterion(name, check):
    ok, detail = check()
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"criterion {name}: {detail}"
