"""One PASS/FAIL line per acceptance criterion (run with ``pytest -s`` to see them inline)."""

import pytest

from drinfeld_measures.verify import CRITERIA, run_criterion

KNOWN_FAILING = {
    9: "the mu-weight lower bound fails for 1 <= n < q^l (e.g. n = 1, l = 1); every other Carlitz check passes",
}


def _report_line(k, rep):
    failed = [c for c in rep.checks if c.status == "fail"]
    status = "PASS" if rep.ok else "FAIL"
    line = f"criterion {k:2d} {status}: {CRITERIA[k][0]} ({len(rep.checks) - len(failed)}/{len(rep.checks)} checks)"
    if failed:
        c = failed[0]
        line += f"; first failure {c.id}: observed {c.observed}, expected {c.expected}"
    return line


def _case(k):
    marks = [pytest.mark.xfail(strict=True, reason=KNOWN_FAILING[k])] if k in KNOWN_FAILING else []
    return pytest.param(k, marks=marks, id=f"criterion_{k}")


@pytest.mark.parametrize("k", [_case(k) for k in sorted(CRITERIA)])
def test_criterion(k, capsys):
    rep = run_criterion(k)
    with capsys.disabled():
        print("\n" + _report_line(k, rep))
    assert rep.checks, "a criterion with no checks proves nothing"
    assert rep.ok, _report_line(k, rep)
