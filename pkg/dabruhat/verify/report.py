"""JSON Lines reports: one record per instance, then one summary object."""
from __future__ import annotations

import csv
import json
import logging
import sys
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

log = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
STATUSES = (PASS, FAIL, INCONCLUSIVE)

CSV_FIELDS = ["check", "index", "status", "anchor", "inputs", "outputs"]


def record(check: str, index: int, anchor: str, status: str, inputs: Dict, outputs: Dict, **extra) -> Dict[str, Any]:
    if status not in STATUSES:
        raise ValueError(f"unknown status {status!r}")
    rec = {
        "check": check,
        "index": index,
        "anchor": anchor,
        "status": status,
        "inputs": inputs,
        "outputs": outputs,
    }
    rec.update(extra)
    return rec


@dataclass
class Report:
    command: str
    ground: str
    records: List[Dict[str, Any]] = field(default_factory=list)
    settings: Dict[str, Any] = field(default_factory=dict)

    def tallies(self) -> Counter:
        counts = Counter({status: 0 for status in STATUSES})
        counts.update(r["status"] for r in self.records)
        return counts

    def summary(self) -> Dict[str, Any]:
        counts = self.tallies()
        total = len(self.records)
        return {
            "summary": True,
            "command": self.command,
            "ground": self.ground,
            "settings": self.settings,
            "total": total,
            PASS: counts[PASS],
            FAIL: counts[FAIL],
            INCONCLUSIVE: counts[INCONCLUSIVE],
            "line": f"{counts[PASS]}/{total} pass",
        }

    def exit_code(self) -> int:
        counts = self.tallies()
        if counts[FAIL]:
            return 1
        if counts[INCONCLUSIVE]:
            return 3
        return 0

    def lines(self):
        for rec in self.records:
            yield json.dumps(rec, sort_keys=True)
        yield json.dumps(self.summary(), sort_keys=True)

    def write_jsonl(self, path: Optional[str] = None) -> None:
        if path is None:
            for line in self.lines():
                sys.stdout.write(line + "\n")
            return
        with open(path, "w") as f:
            for line in self.lines():
                f.write(line + "\n")
        log.info("wrote %d records to %s", len(self.records), path)

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
            writer.writeheader()
            for rec in self.records:
                row = {k: rec.get(k) for k in CSV_FIELDS}
                row["inputs"] = json.dumps(rec.get("inputs", {}), sort_keys=True)
                row["outputs"] = json.dumps(rec.get("outputs", {}), sort_keys=True)
                writer.writerow(row)

