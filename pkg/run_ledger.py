"""
Run Ledger for the acceptance suite

This module accumulates the outcome and timing of each selfcheck claim and
turns them into a manifest dict, a one-line summary and a JSON file.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional


@dataclass
class ClaimRecord:
    name: str
    anchor: str
    passed: bool
    seconds: float
    detail: str


class RunLedger:
    """
    Accumulates claim results for a single selfcheck run
    """

    def __init__(self, run_id: str, logger: Optional[logging.Logger] = None):
        """
        Initialize the ledger for one run

        Args:
            run_id: Identifier written into the manifest
            logger: Optional logger instance
        """
        self.run_id = run_id
        self.logger = logger or logging.getLogger(__name__)
        self.claims: List[ClaimRecord] = []

    def add_claim(self, name: str, anchor: str, passed: bool, seconds: float, detail: str = "") -> None:
        """
        Record one claim

        Args:
            name: Short claim name
            anchor: Statement of the claim in words
            passed: Whether every instance of the claim held
            seconds: Wall time spent on the claim
            detail: What failed, or a short description of what was checked
        """
        self.claims.append(ClaimRecord(name, anchor, bool(passed), round(float(seconds), 3), detail))
        if passed:
            self.logger.info(f"Claim {name} passed in {seconds:.2f}s")
        else:
            self.logger.warning(f"Claim {name} failed in {seconds:.2f}s: {detail}")

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def get_total_summary(self) -> Dict[str, Any]:
        """
        Get the manifest for this run

        Returns:
            Dictionary with every claim plus pass/fail counts and total time
        """
        passed = sum(1 for c in self.claims if c.passed)
        return {
            "run_id": self.run_id,
            "claims": [asdict(c) for c in self.claims],
            "passed": passed,
            "failed": len(self.claims) - passed,
            "total_seconds": round(sum(c.seconds for c in self.claims), 3),
        }

    def get_summary_line(self) -> str:
        summary = self.get_total_summary()
        status = "✅ all claims hold" if summary["failed"] == 0 else f"❌ {summary['failed']} claim(s) failed"
        return f"{status} ({summary['passed']}/{len(self.claims)} in {summary['total_seconds']:.1f}s)"

    def save(self, path: str) -> bool:
        """
        Write the manifest as JSON

        Returns:
            bool: True if saved successfully, False otherwise
        """
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, "w", encoding="utf-8") as f:
                json.dump(self.get_total_summary(), f, indent=2, ensure_ascii=False)
                f.write("\n")
            self.logger.info(f"Saved selfcheck manifest to {path}")
            return True
        except OSError as e:
            self.logger.error(f"Failed to save selfcheck manifest to {path}: {str(e)}")
            return False
