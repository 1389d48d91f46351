from __future__ import annotations

import pytest

from a5flat import checks


@pytest.fixture(scope="module")
def quick():
    return checks.SuiteConfig(samples=10, freeness_samples=200, billiard_traces=20)


def test_quick_suite_passes(quick):
    results = checks.run_suite(quick)
    assert len(results) == len(checks.CHECKS)
    assert all(r.ok for r in results), [r.line() for r in results if not r.ok]


def test_fault_injection_names_table_check(quick):
    cfg = checks.SuiteConfig(**{**quick.__dict__, "inject_fault": "edge-label"})
    res = checks.check_table_one(cfg)
    assert not res.ok
    assert res.line().startswith("FAIL table-1 pairing")


def test_crash_is_reported_as_failure(quick, monkeypatch):
    def boom(cfg):
        raise RuntimeError("kaput")

    monkeypatch.setattr(checks, "CHECKS", [boom])
    (res,) = checks.run_suite(quick)
    assert not res.ok and "kaput" in res.detail


def test_random_loop_counts():
    import random

    rng = random.Random(0)
    for n in (0, 1, 2):
        for _ in range(20):
            _, count = checks.random_loop(rng, n)
            assert count == n
