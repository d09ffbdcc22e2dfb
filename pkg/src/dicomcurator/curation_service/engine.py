"""Composition root tying parsing, index, store, thumbnails and annotators
together behind plain-data methods that the HTTP layer and CLI both call.
"""

from __future__ import annotations

import hashlib
import os
import shutil
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from ..annotator import (
    AnnotatorError,
    AnnotatorManifest,
    bundled_manifest_path,
    load_manifest,
    run_external,
)
from ..concurrency import SeqLock
from ..dataset_store import DatasetStore
from ..dicom_core import (
    DicomError,
    DicomObject,
    frame_count,
    nifti_to_dicom,
    parse_file,
    parse_rtstruct,
    parse_seg,
    serialize,
)
from ..metadata_index import MetadataIndex, export_csv, parse_query
from ..metadata_index.document import doc_to_json
from ..metadata_index.errors import FieldNotInDistribution, IndexError_
from ..thumbnail_engine import (
    ThumbnailConfig,
    cache_path,
    encode_png,
    gray_frame,
    make_thumbnail,
    sort_instances,
)
from .config import CuratorConfig
from .errors import PathNotFound
from .jobs import JobTable

NIFTI_SUFFIXES = (".nii", ".nii.gz")


@dataclass(frozen=True)
class IngestReport:
    scanned: int
    indexed_series: int
    instances: int
    skipped: Tuple[Tuple[str, str], ...]
    duration_ms: float

    def to_json(self) -> dict:
        return {
            "scanned": self.scanned,
            "indexed_series": self.indexed_series,
            "instances": self.instances,
            "skipped": [list(pair) for pair in self.skipped],
            "duration_ms": self.duration_ms,
        }


def _is_nifti_path(path: Path) -> bool:
    name = path.name.lower()
    return name.endswith(".nii") or name.endswith(".nii.gz")


class SeriesNotFound(Exception):
    pass


class SliceNotFound(Exception):
    pass


class UnknownAnnotator(Exception):
    pass


class UnknownJob(Exception):
    pass


class CurationEngine:
    def __init__(self, config: CuratorConfig, workers: int = 2):
        self.config = config
        config.data_dir.mkdir(parents=True, exist_ok=True)
        config.archive_dir.mkdir(parents=True, exist_ok=True)
        self.lock = SeqLock()
        self.index = MetadataIndex(
            journal_path=config.data_dir / "index.journal", lock=self.lock)
        self.store = DatasetStore(
            journal_path=config.data_dir / "store.journal",
            index=self.index, lock=self.lock)
        self._reconcile_tags()
        self.cache_dir = config.data_dir / "thumbs"
        self.jobs = JobTable(workers=workers)
        self.annotators = self._load_annotators()
        # annotation series uid -> series uid it references
        self._relation_cache: Dict[str, Optional[str]] = {}

    def _reconcile_tags(self):
        """Realign the index's tag mirror with the store after a restart.

        The store journal is the system of record for tags; a crash can
        leave the index mirror one write ahead of or behind it. Assignments
        for series the index no longer knows stay put and show up in fsck.
        """
        assigned = {t.series_uid: t.tags for t in self.store.all_tags()}
        for doc in self.index.all_documents():
            want = sorted(assigned.get(doc.series_uid, ()))
            if sorted(doc.tags) != want:
                self.index.set_tags(doc.series_uid, want)

    def close(self):
        self.jobs.shutdown(wait=True)
        self.store.close()
        self.index.close()

    # -- annotator discovery -------------------------------------------

    def _load_annotators(self) -> Dict[str, AnnotatorManifest]:
        manifests: Dict[str, AnnotatorManifest] = {}
        bundled = bundled_manifest_path()
        try:
            manifest = load_manifest(bundled)
            manifests[manifest.name] = manifest
        except AnnotatorError:
            pass
        directory = self.config.annotator_dir
        if directory is not None and Path(directory).is_dir():
            for path in sorted(Path(directory).glob("*.manifest.json")):
                try:
                    manifest = load_manifest(path)
                except AnnotatorError:
                    continue
                manifests[manifest.name] = manifest
        return manifests

    # -- ingest --------------------------------------------------------

    def _archive_object(self, obj: DicomObject, source: Optional[Path]):
        series_uid = obj.series_instance_uid
        sop = obj.sop_instance_uid
        directory = self.config.archive_dir / series_uid
        directory.mkdir(parents=True, exist_ok=True)
        if sop:
            name = f"{sop}.dcm"
        else:
            payload = source.read_bytes() if source else serialize(obj)
            name = f"noid-{hashlib.sha256(payload).hexdigest()[:16]}.dcm"
        destination = directory / name
        if source is not None:
            shutil.copyfile(source, destination)
        else:
            destination.write_bytes(serialize(obj))

    def _ingest_object(self, obj: DicomObject, source: Optional[Path],
                       ingest_time: float, touched: set):
        uid, _outcome = self.index.add_instance(obj, ingest_time=ingest_time)
        touched.add(uid)
        self._archive_object(obj, source)

    def ingest_directory(self, root, recursive: bool = True) -> IngestReport:
        root = Path(root)
        if not root.exists():
            raise PathNotFound(f"path does not exist: {root}")
        started = time.monotonic()
        if root.is_file():
            files = [root]
        elif recursive:
            files = sorted(p for p in root.rglob("*") if p.is_file())
        else:
            files = sorted(p for p in root.iterdir() if p.is_file())

        instances = 0
        skipped: List[Tuple[str, str]] = []
        touched: set = set()
        for path in files:
            now = time.time()
            if _is_nifti_path(path):
                try:
                    objects = nifti_to_dicom(path)
                except DicomError as exc:
                    skipped.append((str(path), exc.code))
                    continue
                for obj in objects:
                    self._ingest_object(obj, None, now, touched)
                instances += len(objects)
                continue
            try:
                obj = parse_file(path)
                self._ingest_object(obj, path, now, touched)
            except (DicomError, IndexError_) as exc:
                skipped.append((str(path), exc.code))
                continue
            instances += 1
        self._relation_cache.clear()
        duration_ms = (time.monotonic() - started) * 1000.0
        return IngestReport(
            scanned=instances + len(skipped),
            indexed_series=len(touched),
            instances=instances,
            skipped=tuple(skipped),
            duration_ms=round(duration_ms, 3),
        )

    # -- series access -------------------------------------------------

    def _require_series(self, uid: str):
        if self.index.get_document(uid) is None:
            raise SeriesNotFound(f"no series {uid!r} in the index")

    def series_dir(self, uid: str) -> Path:
        return self.config.archive_dir / uid

    def series_files(self, uid: str) -> List[Path]:
        directory = self.series_dir(uid)
        if not directory.is_dir():
            return []
        return sorted(p for p in directory.iterdir()
                      if p.is_file() and p.suffix == ".dcm")

    def load_series(self, uid: str) -> List[DicomObject]:
        objects = []
        for path in self.series_files(uid):
            try:
                objects.append(parse_file(path))
            except DicomError:
                continue
        return objects

    def _referenced_series(self, annotation_uid: str) -> Optional[str]:
        if annotation_uid in self._relation_cache:
            return self._relation_cache[annotation_uid]
        target: Optional[str] = None
        for obj in self.load_series(annotation_uid):
            try:
                target = parse_seg(obj).referenced_series_uid
            except DicomError:
                try:
                    target = parse_rtstruct(obj).referenced_series_uid
                except DicomError:
                    target = None
            if target:
                break
        self._relation_cache[annotation_uid] = target
        return target

    def related_annotations(self, uid: str) -> List[DicomObject]:
        """SEG/RTStruct objects from other series that reference this one."""
        related = []
        for doc in self.index.all_documents():
            if doc.modality not in ("SEG", "RTSTRUCT"):
                continue
            if doc.series_uid == uid:
                continue
            if self._referenced_series(doc.series_uid) != uid:
                continue
            related.extend(self.load_series(doc.series_uid))
        related.sort(key=lambda o: o.sop_instance_uid or "")
        return related

    # -- search / aggregate --------------------------------------------

    def search_json(self, q: str, from_: int = 0, size: int = 10,
                    sort: Optional[str] = None) -> dict:
        ast = parse_query(q or "")
        results = self.index.search(ast, from_=from_, size=size, sort=sort)
        hits = []
        for uid, score in results.hits:
            doc = self.index.get_document(uid)
            if doc is None:
                continue
            body = doc_to_json(doc)
            body["score"] = score
            hits.append(body)
        return {
            "total": results.total,
            "from": results.page[0],
            "size": results.page[1],
            "hits": hits,
            "warnings": list(results.warnings),
        }

    def aggregate_json(self, q: str, fields: Sequence[str]) -> dict:
        ast = parse_query(q or "")
        dist = self.index.aggregate(ast, fields)
        return {
            "fields": {
                name: {
                    "buckets": [
                        {"value": value, "count": count}
                        for value, count in facet.buckets
                    ],
                    "missing_count": facet.missing_count,
                }
                for name, facet in dist.per_field.items()
            },
            "warnings": list(dist.warnings),
        }

    def aggregate_csv(self, q: str, fieldname: str) -> bytes:
        if not self.index.has_field(fieldname):
            raise FieldNotInDistribution(f"no field named {fieldname!r}")
        ast = parse_query(q or "")
        dist = self.index.aggregate(ast, [fieldname])
        return export_csv(dist, fieldname)

    def autocomplete_json(self, fieldname: str, prefix: str, limit: int) -> dict:
        pairs = self.index.autocomplete(fieldname, prefix, limit)
        return {"completions": [
            {"value": value, "count": count} for value, count in pairs
        ]}

    def document_json(self, uid: str) -> dict:
        doc = self.index.get_document(uid)
        if doc is None:
            raise SeriesNotFound(f"no series {uid!r} in the index")
        body = doc_to_json(doc)
        body["slice_count"] = self.slice_count(uid)
        return body

    # -- thumbnails / slices -------------------------------------------

    def thumbnail_png(self, uid: str, edge: Optional[int] = None) -> bytes:
        self._require_series(uid)
        cfg = ThumbnailConfig(edge=edge or self.config.thumb_edge)
        cached = cache_path(self.cache_dir, uid, cfg)
        if cached.exists():
            return cached.read_bytes()
        instances = self.load_series(uid)
        related = self.related_annotations(uid)
        png = make_thumbnail(instances, related, cfg)
        cached.parent.mkdir(parents=True, exist_ok=True)
        tmp = cached.with_name(cached.name + ".tmp")
        tmp.write_bytes(png)
        os.replace(tmp, cached)
        return png

    def slice_png(self, uid: str, position: int) -> bytes:
        self._require_series(uid)
        ordered = sort_instances(
            obj for obj in self.load_series(uid) if obj.pixels is not None)
        pairs = [
            (obj, frame)
            for obj in ordered
            for frame in range(frame_count(obj))
        ]
        if not 0 <= position < len(pairs):
            raise SliceNotFound(
                f"series has {len(pairs)} slices, no slice {position}")
        obj, frame = pairs[position]
        gray = gray_frame(obj, frame)
        return encode_png(gray)

    def slice_count(self, uid: str) -> int:
        self._require_series(uid)
        return sum(
            frame_count(obj)
            for obj in self.load_series(uid) if obj.pixels is not None)

    # -- datasets / tags -----------------------------------------------

    def create_dataset_json(self, name: str) -> dict:
        record = self.store.create_dataset(name)
        return {"id": record.id, "name": record.name,
                "created": record.created, "series": sorted(record.series)}

    def list_datasets_json(self) -> dict:
        return {"datasets": [
            {"id": s.id, "name": s.name, "size": s.size}
            for s in self.store.list_datasets()
        ]}

    def get_dataset_json(self, dataset_id: str) -> dict:
        record = self.store.get_dataset(dataset_id)
        return {"id": record.id, "name": record.name,
                "created": record.created, "series": sorted(record.series)}

    def modify_membership_json(self, dataset_id: str, add: Sequence[str],
                               remove: Sequence[str]) -> dict:
        return self.store.modify_membership(dataset_id, add=add, remove=remove)

    def bulk_tag_json(self, uids: Sequence[str], add: Sequence[str],
                      remove: Sequence[str]) -> dict:
        report = self.store.bulk_tag(uids, add_tags=add, remove_tags=remove)
        return {"report": [
            {"series_uid": r.uid, "status": r.status, "tags": list(r.tags)}
            for r in report
        ]}

    def fsck_json(self) -> dict:
        report = self.store.fsck()
        known = {doc.series_uid for doc in self.index.all_documents()}
        orphans = sorted(
            p.name for p in self.config.archive_dir.iterdir()
            if p.is_dir() and p.name not in known
        ) if self.config.archive_dir.is_dir() else []
        report["archive_orphans"] = orphans
        return report

    # -- annotators ----------------------------------------------------

    def list_annotators_json(self) -> dict:
        return {"annotators": [
            {
                "name": m.name,
                "version": m.version,
                "kind": m.kind,
                "label_count": len(m.labels),
            }
            for _, m in sorted(self.annotators.items())
        ]}

    def run_annotator(self, name: str, uids: Sequence[str],
                      timeout: Optional[float] = None) -> str:
        manifest = self.annotators.get(name)
        if manifest is None:
            raise UnknownAnnotator(f"no annotator named {name!r}")
        uids = [str(u) for u in uids]

        def job():
            entries = []
            for uid in uids:
                if self.index.get_document(uid) is None:
                    entries.append({"series_uid": uid, "error": "unknown_series"})
                    continue
                input_dir = self.series_dir(uid)
                if not input_dir.is_dir():
                    entries.append({"series_uid": uid, "error": "unknown_series"})
                    continue
                known_sops = [p.stem for p in self.series_files(uid)]
                kwargs = {} if timeout is None else {"timeout": timeout}
                try:
                    result = run_external(
                        manifest, input_dir, uid, index=self.index,
                        known_sops=known_sops, **kwargs)
                except AnnotatorError as exc:
                    entries.append({"series_uid": uid, "error": exc.code,
                                    "message": str(exc)})
                    continue
                entries.append({
                    "series_uid": uid,
                    "structures": list(result.structures),
                    "body_part": result.body_part,
                    "error": None,
                })
            return {"entries": entries}

        return self.jobs.submit(f"annotate:{name}", job)

    def job_json(self, job_id: str) -> dict:
        job = self.jobs.get(job_id)
        if job is None:
            raise UnknownJob(f"no job {job_id!r}")
        return job
