"""Filesystem job store: one directory per job holding the input bytes,
the job record, and (when done) the report.

All record writes are atomic (temp file + rename), so a crash mid-job can
never leave a job observed as done without its report; on restart,
``recover()`` fails any job that was queued or running.
"""

from __future__ import annotations

import json
import os
import secrets
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from autoviz.report import input_digest

STATES = ("queued", "running", "done", "failed")
_TRANSITIONS = {
    "queued": {"running", "failed"},
    "running": {"done", "failed"},
    "done": set(),
    "failed": set(),
}


@dataclass
class JobRecord:
    id: str
    state: str
    created_at: float
    finished_at: Optional[float] = None
    input_digest: str = ""
    result_location: Optional[str] = None
    error: Optional[dict] = None
    options: dict = field(default_factory=dict)


def is_valid_job_id(job_id: str) -> bool:
    if len(job_id) != 32:
        return False
    try:
        int(job_id, 16)
    except ValueError:
        return False
    return True


class JobStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _dir(self, job_id: str) -> Path:
        return self.root / job_id

    def _write_record(self, record: JobRecord) -> None:
        path = self._dir(record.id) / "record.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(asdict(record), sort_keys=True, indent=2))
        os.replace(tmp, path)

    def create(self, input_bytes: bytes, options: dict) -> JobRecord:
        job_id = secrets.token_hex(16)
        job_dir = self._dir(job_id)
        job_dir.mkdir(parents=True)
        (job_dir / "input.bin").write_bytes(input_bytes)
        record = JobRecord(id=job_id, state="queued",
                           created_at=time.time(),
                           input_digest=input_digest(input_bytes),
                           options=options)
        self._write_record(record)
        return record

    def get(self, job_id: str) -> Optional[JobRecord]:
        path = self._dir(job_id) / "record.json"
        if not path.exists():
            return None
        return JobRecord(**json.loads(path.read_text()))

    def input_bytes(self, job_id: str) -> bytes:
        return (self._dir(job_id) / "input.bin").read_bytes()

    def transition(self, job_id: str, state: str,
                   error: Optional[dict] = None) -> JobRecord:
        record = self.get(job_id)
        if record is None:
            raise KeyError(job_id)
        if state not in _TRANSITIONS[record.state]:
            raise ValueError(
                f"illegal transition {record.state} -> {state}")
        record.state = state
        if state in ("done", "failed"):
            record.finished_at = time.time()
        if error is not None:
            record.error = error
        if state == "done":
            record.result_location = str(self._dir(job_id) / "report.json")
        self._write_record(record)
        return record

    def save_report(self, job_id: str, report_json: str) -> None:
        path = self._dir(job_id) / "report.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(report_json)
        os.replace(tmp, path)

    def report_json(self, job_id: str) -> Optional[str]:
        path = self._dir(job_id) / "report.json"
        return path.read_text() if path.exists() else None

    def recover(self) -> list[str]:
        """Fail any job left queued or running by a previous process."""
        failed = []
        for job_dir in self.root.iterdir():
            record = self.get(job_dir.name)
            if record is None:
                continue
            if record.state in ("queued", "running"):
                self.transition(record.id, "failed", error={
                    "code": "interrupted",
                    "message": "job interrupted by service restart"})
                failed.append(record.id)
        return failed
