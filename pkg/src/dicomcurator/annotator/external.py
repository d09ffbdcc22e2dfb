"""External annotator protocol: directory in, directory out, subprocess.

An annotator is described by a JSON manifest whose invocation template
names `{input_dir}` and `{output_dir}` exactly once each. The child
process additionally receives CURATOR_SERIES_UID and CURATOR_OUTPUT_DIR
in its environment. On success the output directory is scanned for
DICOM-SEG files and an optional result.json sidecar:

    {"series_uid": "...", "structures": ["liver", ...], "body_part": "..."}

Sidecar structures must stay within the manifest's label set; SEG
segment labels are trusted as-is since they are first-class data.
"""

from __future__ import annotations

import json
import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from ..dicom_core import DicomError, parse_file, parse_seg
from .errors import AnnotatorFailed, InvalidManifest, ProtocolViolation, Timeout
from .headers import AnnotationResult
from .seg_labels import ingest_seg_labels

DEFAULT_TIMEOUT_S = 600.0

MANIFEST_KINDS = ("segmentation", "classification")


@dataclass(frozen=True)
class AnnotatorManifest:
    name: str
    version: str
    labels: Tuple[str, ...]
    kind: str
    invocation: str

    @property
    def source(self) -> str:
        return f"{self.name}/{self.version}"


def _require(condition: bool, message: str):
    if not condition:
        raise InvalidManifest(message)


def load_manifest(path) -> AnnotatorManifest:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidManifest(f"{path}: {exc}")
    return manifest_from_dict(raw, origin=str(path))


def manifest_from_dict(raw, origin: str = "<manifest>") -> AnnotatorManifest:
    _require(isinstance(raw, dict), f"{origin}: manifest must be an object")
    name = raw.get("name")
    version = raw.get("version")
    labels = raw.get("labels")
    kind = raw.get("kind")
    invocation = raw.get("invocation")
    _require(isinstance(name, str) and name.strip() != "", f"{origin}: missing name")
    _require(isinstance(version, (str, int, float)) and str(version).strip() != "",
             f"{origin}: missing version")
    _require(isinstance(labels, list) and len(labels) > 0,
             f"{origin}: labels must be a non-empty list")
    lowered = [str(label).lower() for label in labels]
    _require(len(set(lowered)) == len(lowered), f"{origin}: labels must be unique")
    _require(kind in MANIFEST_KINDS,
             f"{origin}: kind must be one of {MANIFEST_KINDS}")
    _require(isinstance(invocation, str), f"{origin}: missing invocation")
    for placeholder in ("{input_dir}", "{output_dir}"):
        count = invocation.count(placeholder)
        _require(count == 1,
                 f"{origin}: invocation must contain {placeholder} exactly once")
    return AnnotatorManifest(
        name=name.strip(),
        version=str(version).strip(),
        labels=tuple(lowered),
        kind=kind,
        invocation=invocation,
    )


def _load_sidecar(path: Path, manifest: AnnotatorManifest, series_uid: str):
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ProtocolViolation(f"malformed result.json: {exc}")
    if not isinstance(raw, dict):
        raise ProtocolViolation("result.json must be an object")
    claimed = raw.get("series_uid")
    if claimed is not None and str(claimed) != series_uid:
        raise ProtocolViolation(
            f"result.json is for series {claimed}, expected {series_uid}")
    structures = raw.get("structures", [])
    if not isinstance(structures, list) or any(
            not isinstance(s, str) for s in structures):
        raise ProtocolViolation("result.json structures must be a string list")
    structures = [s.lower() for s in structures]
    allowed = set(manifest.labels)
    if manifest.kind == "segmentation":
        outside = sorted(set(structures) - allowed)
        if outside:
            raise ProtocolViolation(
                f"structures outside manifest labels: {outside}")
    body_part = raw.get("body_part")
    if body_part is not None:
        if not isinstance(body_part, str):
            raise ProtocolViolation("result.json body_part must be a string")
        body_part = body_part.lower()
        if manifest.kind == "classification" and body_part not in allowed:
            raise ProtocolViolation(
                f"body_part {body_part!r} outside manifest labels")
    return structures, body_part


def run_external(manifest: AnnotatorManifest, input_dir, series_uid: str,
                 index=None, known_sops=None, timeout: float = DEFAULT_TIMEOUT_S,
                 output_dir=None) -> AnnotationResult:
    """Run one annotator over a series directory and collect its output."""
    input_dir = Path(input_dir)
    if output_dir is None:
        output_dir = Path(tempfile.mkdtemp(prefix="annotator-out-"))
    else:
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)

    tokens = [
        token.replace("{input_dir}", str(input_dir))
             .replace("{output_dir}", str(output_dir))
        for token in shlex.split(manifest.invocation)
    ]
    env = dict(os.environ)
    env["CURATOR_SERIES_UID"] = series_uid
    env["CURATOR_OUTPUT_DIR"] = str(output_dir)
    try:
        proc = subprocess.run(tokens, env=env, capture_output=True,
                              text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        raise Timeout(f"{manifest.source} exceeded {timeout:.0f}s")
    except OSError as exc:
        raise AnnotatorFailed(f"{manifest.source} could not start: {exc}")
    if proc.returncode != 0:
        raise AnnotatorFailed(
            f"{manifest.source} exited {proc.returncode}", stderr=proc.stderr)

    structures: set = set()
    body_part: Optional[str] = None
    sidecar = output_dir / "result.json"
    if sidecar.exists():
        sidecar_structures, body_part = _load_sidecar(sidecar, manifest, series_uid)
        structures.update(sidecar_structures)

    seg_files = []
    for path in sorted(output_dir.rglob("*.dcm")):
        try:
            seg = parse_seg(parse_file(path))
        except DicomError:
            continue
        seg_files.append(str(path))
        structures.update(label.lower() for label in seg.labels() if label)
        if index is not None:
            ingest_seg_labels(index, seg, series_uid, known_sops=known_sops)

    if index is not None:
        doc = index.get_document(series_uid)
        if doc is not None:
            if structures:
                merged = sorted(set(doc.anatomical_structures) | structures)
                index.set_structures(series_uid, merged)
            if body_part is not None:
                index.set_body_part(series_uid, body_part)

    return AnnotationResult(
        series_uid=series_uid,
        source=manifest.source,
        structures=tuple(sorted(structures)),
        body_part=body_part,
        produced_seg_files=tuple(seg_files),
    )
