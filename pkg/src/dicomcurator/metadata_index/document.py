"""SeriesDocument: the searchable unit derived from DICOM headers.

One document per series.  Header elements become typed fields keyed by
dictionary keyword; instances merge into the series document first-wins for
scalars, union for keyword lists.
"""

from __future__ import annotations

import datetime
import time
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Optional

from ..dicom_core import DicomObject
from ..dicom_core.elements import BINARY_VR_FORMATS, DataElement
from ..dicom_core.tags import MODALITY, PIXEL_DATA, T
from .errors import MissingSeriesUid, SeriesUidMismatch

# Field kinds.  "pn" behaves as keyword and free-text at once.
KW = "kw"
TEXT = "text"
PN = "pn"
DATE = "date"
NUM = "num"

_VR_KIND = {
    "DA": DATE,
    "PN": PN,
    "LT": TEXT,
    "ST": TEXT,
    "UT": TEXT,
    "DS": NUM,
    "IS": NUM,
}
for _vr in BINARY_VR_FORMATS:
    _VR_KIND[_vr] = NUM

# Curation fields own these names; a DICOM keyword that collides is renamed
# with a `_dicom` suffix at document-build time.
RESERVED_FIELDS = frozenset({"tags", "anatomical_structures", "body_part"})


@dataclass(frozen=True)
class FieldValue:
    kind: str
    values: tuple  # strings for kw/text/pn/date, floats for num


@dataclass(frozen=True)
class SeriesDocument:
    series_uid: str
    study_uid: str = ""
    patient_id: str = ""
    modality: str = ""
    fields: dict[str, FieldValue] = field(default_factory=dict)
    instance_count: int = 1
    has_pixel_data: bool = False
    tags: tuple[str, ...] = ()
    anatomical_structures: tuple[str, ...] = ()
    body_part: Optional[str] = None
    ingest_time: float = 0.0
    warnings: tuple[str, ...] = ()
    field_conflicts: tuple[str, ...] = ()


def normalize_date(raw: str) -> Optional[str]:
    """DICOM DA `YYYYMMDD` → `YYYY-MM-DD`; None when not a real date."""
    s = raw.strip()
    if len(s) != 8 or not s.isdigit():
        return None
    try:
        d = datetime.date(int(s[:4]), int(s[4:6]), int(s[6:8]))
    except ValueError:
        return None
    return d.isoformat()


def canonical_number(v: float) -> str:
    """Stable text form used for facet labels and pattern matching."""
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _field_key(keyword: str) -> str:
    if keyword.lower() in RESERVED_FIELDS:
        return keyword + "_dicom"
    return keyword


def _convert(el: DataElement, warnings: list[str]) -> Optional[tuple[str, FieldValue]]:
    key = _field_key(el.keyword)
    if el.vr == "SQ":
        return key + "_count", FieldValue(NUM, (float(len(el.items())),))
    if isinstance(el.value, bytes) or el.vr == "AT":
        return None
    if not el.value:
        return None
    kind = _VR_KIND.get(el.vr, KW)
    if kind == DATE:
        out = []
        for v in el.value:
            iso = normalize_date(str(v))
            if iso is None:
                warnings.append(f"invalid date in {key}: {v!r}")
            else:
                out.append(iso)
        return (key, FieldValue(DATE, tuple(out))) if out else None
    if kind == NUM:
        nums = []
        for v in el.value:
            try:
                nums.append(float(v))
            except (TypeError, ValueError):
                warnings.append(f"non-numeric value in {key}: {v!r}")
        return (key, FieldValue(NUM, tuple(nums))) if nums else None
    values = tuple(str(v) for v in el.value)
    return key, FieldValue(kind, values)


def to_document(obj: DicomObject, ingest_time: Optional[float] = None) -> SeriesDocument:
    series_uid = obj.series_instance_uid
    if not series_uid:
        raise MissingSeriesUid("object has no SeriesInstanceUID")

    warnings: list[str] = []
    fields: dict[str, FieldValue] = {}
    for el in obj.elements:
        if el.tag.is_private or el.tag == PIXEL_DATA:
            continue
        converted = _convert(el, warnings)
        if converted is None:
            continue
        key, fv = converted
        if key not in fields:
            fields[key] = fv

    modality = obj.get_value(MODALITY)
    study = obj.study_instance_uid or ""
    patient = obj.get_value(T(0x0010, 0x0020))
    has_pixels = obj.pixels is not None or PIXEL_DATA in obj

    return SeriesDocument(
        series_uid=series_uid,
        study_uid=study,
        patient_id=str(patient) if patient is not None else "",
        modality=str(modality) if modality is not None else "",
        fields=fields,
        instance_count=1,
        has_pixel_data=has_pixels,
        ingest_time=time.time() if ingest_time is None else ingest_time,
        warnings=tuple(dict.fromkeys(warnings)),
    )


def _union_keywords(a: tuple, b: tuple) -> tuple:
    """Case-insensitive union, first-seen original case and order kept."""
    seen: dict[str, str] = {}
    for v in (*a, *b):
        seen.setdefault(str(v).casefold(), v)
    return tuple(seen.values())


def merge_instance(doc: SeriesDocument, obj: DicomObject) -> SeriesDocument:
    incoming = to_document(obj, ingest_time=doc.ingest_time)
    if incoming.series_uid != doc.series_uid:
        raise SeriesUidMismatch(
            f"instance belongs to {incoming.series_uid}, document is {doc.series_uid}"
        )

    fields = dict(doc.fields)
    conflicts = list(doc.field_conflicts)
    for key, fv in incoming.fields.items():
        mine = fields.get(key)
        if mine is None:
            fields[key] = fv
            continue
        if fv.kind in (KW, PN) and mine.kind == fv.kind:
            if len(mine.values) > 1 or len(fv.values) > 1:
                # Multi-valued keyword fields (ImageType and friends) are
                # lists: merging unions them.
                fields[key] = FieldValue(fv.kind, _union_keywords(mine.values, fv.values))
                continue
            same = (
                mine.values
                and fv.values
                and str(mine.values[0]).casefold() == str(fv.values[0]).casefold()
            )
            if not same and key not in conflicts:
                conflicts.append(key)  # first instance's value stands
            continue
        if mine.values != fv.values and key not in conflicts:
            conflicts.append(key)  # first instance's value stands

    return replace(
        doc,
        study_uid=doc.study_uid or incoming.study_uid,
        patient_id=doc.patient_id or incoming.patient_id,
        modality=doc.modality or incoming.modality,
        fields=fields,
        instance_count=doc.instance_count + 1,
        has_pixel_data=doc.has_pixel_data or incoming.has_pixel_data,
        warnings=tuple(dict.fromkeys((*doc.warnings, *incoming.warnings))),
        field_conflicts=tuple(conflicts),
    )


def doc_to_json(doc: SeriesDocument) -> dict[str, Any]:
    return {
        "series_uid": doc.series_uid,
        "study_uid": doc.study_uid,
        "patient_id": doc.patient_id,
        "modality": doc.modality,
        "fields": {k: {"kind": fv.kind, "values": list(fv.values)} for k, fv in doc.fields.items()},
        "instance_count": doc.instance_count,
        "has_pixel_data": doc.has_pixel_data,
        "tags": list(doc.tags),
        "anatomical_structures": list(doc.anatomical_structures),
        "body_part": doc.body_part,
        "ingest_time": doc.ingest_time,
        "warnings": list(doc.warnings),
        "field_conflicts": list(doc.field_conflicts),
    }


def doc_from_json(data: dict[str, Any]) -> SeriesDocument:
    fields = {
        k: FieldValue(v["kind"], tuple(v["values"])) for k, v in data.get("fields", {}).items()
    }
    return SeriesDocument(
        series_uid=data["series_uid"],
        study_uid=data.get("study_uid", ""),
        patient_id=data.get("patient_id", ""),
        modality=data.get("modality", ""),
        fields=fields,
        instance_count=int(data.get("instance_count", 1)),
        has_pixel_data=bool(data.get("has_pixel_data", False)),
        tags=tuple(data.get("tags", ())),
        anatomical_structures=tuple(data.get("anatomical_structures", ())),
        body_part=data.get("body_part"),
        ingest_time=float(data.get("ingest_time", 0.0)),
        warnings=tuple(data.get("warnings", ())),
        field_conflicts=tuple(data.get("field_conflicts", ())),
    )
