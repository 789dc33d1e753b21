"""The ten acceptance criteria at full size.  Each prints one PASS/FAIL line."""

import pytest

from ramcycles.selftest import CHECKS, check_5, check_6, run_check


@pytest.mark.parametrize("number", range(1, len(CHECKS) + 1))
def test_criterion(number, capsys):
    fn = CHECKS[number - 1]
    kw = {"seed": 0, "size": 300} if fn in (check_5, check_6) else {}
    res = run_check(fn, **kw)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail + (f" {res.data}" if res.data else "")
