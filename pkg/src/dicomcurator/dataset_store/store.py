"""Durable named datasets and per-series tags.

State lives in an append-only NDJSON operation journal headed by a
version line ``{"v": 1}``. A snapshot file with the same header holds a
compacted copy of the full state; loading reads the snapshot first and
then replays the journal on top. Replay is idempotent, so a crash
between writing a new snapshot and truncating the journal is harmless.

Tags are mirrored into the metadata index (when one is attached) so
that ``tags:x`` queries and the stored assignments can never drift at a
quiescent point. Mutations run under the same writer lock as the index.
"""

from __future__ import annotations

import json
import os
import re
import time
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from ..concurrency import SeqLock
from .errors import (
    DuplicateName,
    InvalidName,
    InvalidTag,
    OverlappingAddRemove,
    StoreError,
    UnknownDataset,
)

JOURNAL_VERSION = 1
TAG_PATTERN = re.compile(r"^[a-z0-9 _:-]{1,64}\Z")  # \Z: reject trailing newline


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    name: str
    created: float
    series: frozenset


@dataclass(frozen=True)
class DatasetSummary:
    id: str
    name: str
    size: int


@dataclass(frozen=True)
class TagAssignment:
    series_uid: str
    tags: frozenset


@dataclass(frozen=True)
class TagOutcome:
    uid: str
    status: str  # "ok" | "unknown_series"
    tags: Tuple[str, ...]


@dataclass
class _Dataset:
    id: str
    name: str
    created: float
    series: Set[str]


def normalize_tag(tag: str) -> str:
    """Lowercase a tag; raises InvalidTag when the result is out of charset."""
    lowered = str(tag).lower()
    if not TAG_PATTERN.match(lowered):
        raise InvalidTag(
            f"tag {tag!r} invalid: 1..64 chars from [a-z0-9 _:-] after lowercasing")
    return lowered


def _check_header(line: str, path: Path):
    try:
        header = json.loads(line)
    except json.JSONDecodeError:
        raise StoreError(f"{path}: missing journal version header")
    if not isinstance(header, dict) or header.get("v") != JOURNAL_VERSION:
        raise StoreError(f"{path}: unsupported journal version {header!r}")


def _header_torn(first: str) -> bool:
    """True when the header line itself was cut short by a crash.

    Journal damage is always a lost suffix, so a header missing its
    newline means the file died during creation and holds nothing else
    worth keeping.  A newline-terminated line that fails to parse is
    real corruption and stays an error.
    """
    return not first.strip() or not first.endswith("\n")


class DatasetStore:
    """Datasets, membership, and tags with journal-backed durability."""

    def __init__(self, journal_path=None, snapshot_path=None, index=None,
                 lock: Optional[SeqLock] = None, clock=time.time):
        self._journal_path = Path(journal_path) if journal_path else None
        if snapshot_path is not None:
            self._snapshot_path = Path(snapshot_path)
        elif self._journal_path is not None:
            self._snapshot_path = self._journal_path.with_suffix(".snapshot")
        else:
            self._snapshot_path = None
        self._index = index
        self._lock = lock or SeqLock()
        self._clock = clock
        self._datasets: Dict[str, _Dataset] = {}
        self._names: Dict[str, str] = {}
        self._tags: Dict[str, Set[str]] = {}
        self._journal = None
        self._journal_reset = False
        self._load()
        if self._journal_path is not None:
            self._journal_path.parent.mkdir(parents=True, exist_ok=True)
            fresh = not self._journal_path.exists()
            if self._journal_reset:
                self._journal_path.unlink()
                fresh = True
            self._journal = open(self._journal_path, "a", encoding="utf-8")
            if fresh:
                self._append({"v": JOURNAL_VERSION})

    # -- persistence ----------------------------------------------------

    def _load(self):
        if self._snapshot_path is not None and self._snapshot_path.exists():
            self._load_file(self._snapshot_path)
        if self._journal_path is not None and self._journal_path.exists():
            if not self._load_file(self._journal_path):
                self._journal_reset = True

    def _load_file(self, path: Path) -> bool:
        """Replay one file; False means it needs a fresh header written."""
        with open(path, "r", encoding="utf-8") as fh:
            first = fh.readline()
            if _header_torn(first):
                return False
            _check_header(first, path)
            for line in fh:
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    break  # truncated tail: everything before it still counts
                if not isinstance(record, dict):
                    break
                self._replay(record)
        return True

    def _replay(self, record: dict):
        op = record.get("op")
        if op == "create":
            ds_id = record["id"]
            if ds_id in self._datasets:
                return
            dataset = _Dataset(id=ds_id, name=record["name"],
                               created=record["created"],
                               series=set(record.get("series", ())))
            self._datasets[ds_id] = dataset
            self._names[dataset.name.casefold()] = ds_id
        elif op == "members":
            dataset = self._datasets.get(record["id"])
            if dataset is None:
                return
            dataset.series.update(record.get("add", ()))
            dataset.series.difference_update(record.get("remove", ()))
        elif op == "tags":
            tags = set(record.get("tags", ()))
            if tags:
                self._tags[record["uid"]] = tags
            else:
                self._tags.pop(record["uid"], None)

    def _append(self, record: dict):
        if self._journal is None:
            return
        self._journal.write(json.dumps(record, sort_keys=True) + "\n")
        self._journal.flush()
        os.fsync(self._journal.fileno())

    def snapshot(self):
        """Compact state into the snapshot file and truncate the journal."""
        if self._snapshot_path is None:
            return
        with self._lock.writing():
            lines = [json.dumps({"v": JOURNAL_VERSION})]
            for dataset in self._datasets.values():
                lines.append(json.dumps({
                    "op": "create",
                    "id": dataset.id,
                    "name": dataset.name,
                    "created": dataset.created,
                    "series": sorted(dataset.series),
                }, sort_keys=True))
            for uid in sorted(self._tags):
                lines.append(json.dumps(
                    {"op": "tags", "uid": uid, "tags": sorted(self._tags[uid])},
                    sort_keys=True))
            tmp = self._snapshot_path.with_name(self._snapshot_path.name + ".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self._snapshot_path)
            if self._journal is not None:
                self._journal.close()
                tmp_journal = self._journal_path.with_name(
                    self._journal_path.name + ".tmp")
                with open(tmp_journal, "w", encoding="utf-8") as fh:
                    fh.write(json.dumps({"v": JOURNAL_VERSION}) + "\n")
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp_journal, self._journal_path)
                self._journal = open(self._journal_path, "a", encoding="utf-8")

    def close(self):
        if self._journal is not None:
            self._journal.close()
            self._journal = None

    # -- datasets -------------------------------------------------------

    def create_dataset(self, name: str) -> DatasetRecord:
        if not isinstance(name, str) or not 1 <= len(name) <= 128 or not name.strip():
            raise InvalidName("dataset name must be 1..128 non-blank characters")
        with self._lock.writing():
            if name.casefold() in self._names:
                raise DuplicateName(f"dataset name {name!r} already taken")
            dataset = _Dataset(id=uuid.uuid4().hex[:12], name=name,
                               created=float(self._clock()), series=set())
            self._append({
                "op": "create",
                "id": dataset.id,
                "name": dataset.name,
                "created": dataset.created,
            })
            self._datasets[dataset.id] = dataset
            self._names[name.casefold()] = dataset.id
            return self._record(dataset)

    def _record(self, dataset: _Dataset) -> DatasetRecord:
        return DatasetRecord(id=dataset.id, name=dataset.name,
                             created=dataset.created,
                             series=frozenset(dataset.series))

    def modify_membership(self, dataset_id: str, add: Sequence[str] = (),
                          remove: Sequence[str] = ()) -> Dict[str, int]:
        add_set = {str(u) for u in add}
        remove_set = {str(u) for u in remove}
        overlap = add_set & remove_set
        if overlap:
            raise OverlappingAddRemove(
                f"uids in both add and remove: {sorted(overlap)}")
        with self._lock.writing():
            dataset = self._datasets.get(dataset_id)
            if dataset is None:
                raise UnknownDataset(f"no dataset with id {dataset_id!r}")
            to_add = sorted(add_set - dataset.series)
            to_remove = sorted(remove_set & dataset.series)
            ignored = (len(add_set) - len(to_add)) + (len(remove_set) - len(to_remove))
            if to_add or to_remove:
                self._append({
                    "op": "members",
                    "id": dataset_id,
                    "add": to_add,
                    "remove": to_remove,
                })
                dataset.series.update(to_add)
                dataset.series.difference_update(to_remove)
            return {"added": len(to_add), "removed": len(to_remove),
                    "ignored": ignored}

    def list_datasets(self) -> List[DatasetSummary]:
        def snapshot():
            return [
                DatasetSummary(id=d.id, name=d.name, size=len(d.series))
                for d in self._datasets.values()
            ]
        summaries = self._lock.read(snapshot)
        return sorted(summaries, key=lambda s: (s.name.casefold(), s.name, s.id))

    def get_dataset(self, dataset_id: str) -> DatasetRecord:
        def snapshot():
            dataset = self._datasets.get(dataset_id)
            return self._record(dataset) if dataset is not None else None
        record = self._lock.read(snapshot)
        if record is None:
            raise UnknownDataset(f"no dataset with id {dataset_id!r}")
        return record

    # -- tags -----------------------------------------------------------

    def bulk_tag(self, uids: Sequence[str], add_tags: Sequence[str] = (),
                 remove_tags: Sequence[str] = ()) -> List[TagOutcome]:
        add = {normalize_tag(t) for t in add_tags}
        remove = {normalize_tag(t) for t in remove_tags}
        report: List[TagOutcome] = []
        with self._lock.writing():
            for uid in uids:
                uid = str(uid)
                known = (self._index is not None
                         and self._index.get_document(uid) is not None)
                if not known:
                    report.append(TagOutcome(uid=uid, status="unknown_series",
                                             tags=()))
                    continue
                final = (self._tags.get(uid, set()) | add) - remove
                self._append({"op": "tags", "uid": uid, "tags": sorted(final)})
                if final:
                    self._tags[uid] = set(final)
                else:
                    self._tags.pop(uid, None)
                if self._index is not None:
                    self._index.set_tags(uid, sorted(final))
                report.append(TagOutcome(uid=uid, status="ok",
                                         tags=tuple(sorted(final))))
        return report

    def get_tags(self, uid: str) -> TagAssignment:
        tags = self._lock.read(lambda: frozenset(self._tags.get(uid, ())))
        return TagAssignment(series_uid=uid, tags=tags)

    def all_tags(self) -> List[TagAssignment]:
        def snapshot():
            return [
                TagAssignment(series_uid=uid, tags=frozenset(tags))
                for uid, tags in self._tags.items()
            ]
        return sorted(self._lock.read(snapshot), key=lambda t: t.series_uid)

    # -- integrity ------------------------------------------------------

    def fsck(self) -> Dict[str, list]:
        """Report membership and tag entries pointing at unindexed series."""
        def known_uids() -> Iterable[str]:
            if self._index is None:
                return ()
            return {doc.series_uid for doc in self._index.all_documents()}

        with self._lock.writing():
            known = set(known_uids())
            dangling_members = sorted(
                (dataset.id, uid)
                for dataset in self._datasets.values()
                for uid in dataset.series
                if uid not in known
            )
            dangling_tags = sorted(u for u in self._tags if u not in known)
        return {
            "dangling_memberships": [list(pair) for pair in dangling_members],
            "dangling_tags": dangling_tags,
        }
