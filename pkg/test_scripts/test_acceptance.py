"""
Tests for the selfcheck suite and its run ledger.

Each acceptance claim runs on its own; the full grid is marked slow.
"""

import asyncio
import json

import jsonschema
import pytest

from job_schema import load_schema
from run_ledger import RunLedger
from selfcheck import CLAIMS, Claim, run_claim, run_selfcheck


def _passing(settings):
    return True, "fine"


def _failing(settings):
    return False, "C2: wrong"


def _raising(settings):
    raise ArithmeticError("boom")


def test_claim_names_are_unique():
    names = [c.name for c in CLAIMS]
    assert len(names) == len(set(names))
    assert all(c.anchor for c in CLAIMS)


@pytest.mark.slow
@pytest.mark.parametrize("claim", CLAIMS, ids=[c.name for c in CLAIMS])
def test_claim_holds(claim, settings):
    (passed, detail), seconds = run_claim(claim, settings)
    assert passed, detail
    assert seconds >= 0


def test_raising_claim_is_reported_as_failure(settings):
    (passed, detail), _ = run_claim(Claim("raises", "never holds", _raising), settings)
    assert not passed
    assert "ArithmeticError" in detail


def test_results_are_recorded_in_claim_order(settings):
    claims = [Claim("first", "holds", _passing), Claim("second", "fails", _failing),
              Claim("third", "raises", _raising)]
    ledger = asyncio.run(run_selfcheck(threads=3, settings=settings, claims=claims))
    assert [c.name for c in ledger.claims] == ["first", "second", "third"]
    assert not ledger.all_passed

    manifest = ledger.get_total_summary()
    jsonschema.validate(manifest, load_schema("selfcheck_manifest"))
    assert (manifest["passed"], manifest["failed"]) == (1, 2)
    assert ledger.get_summary_line().startswith("❌ 2 claim(s) failed")


def test_real_claim_through_the_runner(settings):
    claims = [c for c in CLAIMS if c.name == "symmetric_c2_f2"]
    ledger = asyncio.run(run_selfcheck(settings=settings, claims=claims))
    assert ledger.all_passed
    assert ledger.get_summary_line().startswith("✅")


def test_ledger_save(tmp_path):
    ledger = RunLedger("abc123")
    ledger.add_claim("one", "holds", True, 0.12345)
    ledger.add_claim("two", "fails", False, 1.0, "C3: wrong")
    path = tmp_path / "out" / "manifest.json"
    assert ledger.save(str(path))

    document = json.loads(path.read_text(encoding="utf-8"))
    jsonschema.validate(document, load_schema("selfcheck_manifest"))
    assert document["run_id"] == "abc123"
    assert document["claims"][0]["seconds"] == 0.123
    assert document["total_seconds"] == 1.123


def test_ledger_save_reports_failure(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    assert not RunLedger("x").save(str(blocker / "manifest.json"))
