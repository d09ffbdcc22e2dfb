"""Bounded worker pool with a queryable job table for annotator runs."""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Optional

QUEUED = "queued"
RUNNING = "running"
DONE = "done"
FAILED = "failed"


class JobTable:
    def __init__(self, workers: int = 2):
        self._pool = ThreadPoolExecutor(max_workers=workers)
        self._jobs: Dict[str, dict] = {}
        self._mutex = threading.Lock()

    def submit(self, kind: str, fn: Callable[[], Any]) -> str:
        job_id = uuid.uuid4().hex[:12]
        with self._mutex:
            self._jobs[job_id] = {"id": job_id, "kind": kind, "status": QUEUED,
                                  "result": None, "error": None}

        def run():
            with self._mutex:
                self._jobs[job_id]["status"] = RUNNING
            try:
                result = fn()
            except Exception as exc:
                with self._mutex:
                    self._jobs[job_id]["status"] = FAILED
                    self._jobs[job_id]["error"] = str(exc)
            else:
                with self._mutex:
                    self._jobs[job_id]["status"] = DONE
                    self._jobs[job_id]["result"] = result

        self._pool.submit(run)
        return job_id

    def get(self, job_id: str) -> Optional[dict]:
        with self._mutex:
            job = self._jobs.get(job_id)
            return dict(job) if job is not None else None

    def shutdown(self, wait: bool = True):
        self._pool.shutdown(wait=wait)
