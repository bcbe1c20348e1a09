"""
Acceptance runs of the seeded property suites
"""
import asyncio

import pytest

from checks import SUITES, SuiteReport, run_suite, run_suites
from config import override_config
from errors import InvalidInput


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    report = run_suite(name, seed=20240229)
    assert report.cases > 0
    assert report.passed, report.failures[:3]


def test_suites_are_reproducible():
    first = run_suite("complements", seed=9)
    again = run_suite("complements", seed=9)
    assert first.cases == again.cases and first.failures == again.failures


def test_seed_defaults_to_config():
    with override_config(seed=17):
        assert run_suite("galois").seed == 17


def test_unknown_suite():
    with pytest.raises(InvalidInput):
        run_suite("nope")


def test_run_suites_keeps_order():
    reports = asyncio.run(run_suites(["galois", "factor-count", "galois"], seed=1))
    assert [r.name for r in reports] == ["galois", "factor-count", "galois"]


def test_report_bookkeeping():
    report = SuiteReport(name="demo", seed=0)
    report.case(True)
    report.case(False, reason="broken")
    assert report.cases == 2 and not report.passed
    assert report.to_dict()["failures"] == [{"reason": "broken"}]
