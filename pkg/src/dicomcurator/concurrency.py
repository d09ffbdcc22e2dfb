"""Single-writer / multi-reader coordination.

A sequence-lock: writers serialize on a reentrant lock and bump a version
counter around each mutation (odd while a write is in flight).  Readers run
lock-free against the live structures and retry when the version moved under
them, so they never block the writer.  After repeated collisions a reader
falls back to taking the write lock once, which bounds retry time under a
write-heavy load.

Read closures must be side-effect-free and must copy data out (no live dict
views in the result); a retried closure may observe a half-applied write and
its partial result is discarded.
"""

from __future__ import annotations

import threading
import time
from contextlib import contextmanager
from typing import Callable, TypeVar

T = TypeVar("T")

_RETRIES = 50


class SeqLock:
    def __init__(self):
        self._lock = threading.RLock()
        self._depth = 0
        self.version = 0

    @contextmanager
    def writing(self):
        with self._lock:
            self._depth += 1
            if self._depth == 1:
                self.version += 1
            try:
                yield
            finally:
                self._depth -= 1
                if self._depth == 0:
                    self.version += 1

    def read(self, fn: Callable[[], T]) -> T:
        for _ in range(_RETRIES):
            v1 = self.version
            if v1 & 1:
                time.sleep(0)  # writer in flight; give it the GIL
                continue
            try:
                result = fn()
            except RuntimeError:
                # Structure mutated mid-iteration; retry on a fresh snapshot.
                continue
            if self.version == v1:
                return result
        with self._lock:
            return fn()
