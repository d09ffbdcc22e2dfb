"""Header-based body part annotation.

A fixed synonym table normalizes the free-ranging BodyPartExamined
vocabulary into a small set of canonical lowercase regions. This stands
in for a learned body-part model; the searchable field it feeds is the
same either way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

HEADER_SOURCE = "header-annotator/1"

# canonical region by uppercased BodyPartExamined value
BODY_PART_SYNONYMS = {
    "HEAD": "head",
    "SKULL": "head",
    "BRAIN": "head",
    "NECK": "neck",
    "CSPINE": "neck",
    "CHEST": "chest",
    "THORAX": "chest",
    "LUNG": "chest",
    "HEART": "chest",
    "TSPINE": "chest",
    "ABDOMEN": "abdomen",
    "LIVER": "abdomen",
    "KIDNEY": "abdomen",
    "LSPINE": "abdomen",
    "PELVIS": "pelvis",
    "HIP": "pelvis",
    "BLADDER": "pelvis",
    "PROSTATE": "pelvis",
    "SPINE": "spine",
    "SSPINE": "spine",
    "SHOULDER": "upper extremity",
    "ARM": "upper extremity",
    "ELBOW": "upper extremity",
    "HAND": "upper extremity",
    "WRIST": "upper extremity",
    "LEG": "lower extremity",
    "KNEE": "lower extremity",
    "ANKLE": "lower extremity",
    "FOOT": "lower extremity",
    "WHOLEBODY": "whole body",
}


@dataclass(frozen=True)
class AnnotationResult:
    series_uid: str
    source: str
    structures: Tuple[str, ...] = ()
    body_part: Optional[str] = None
    produced_seg_files: Tuple[str, ...] = ()


def normalize_body_part(raw: Optional[str]) -> Optional[str]:
    if raw is None:
        return None
    key = str(raw).strip().upper().replace(" ", "").replace("_", "")
    return BODY_PART_SYNONYMS.get(key)


def annotate_from_headers(doc) -> AnnotationResult:
    """Derive body_part for one series document from BodyPartExamined."""
    field = doc.fields.get("BodyPartExamined")
    raw = None
    if field is not None and field.values:
        raw = str(field.values[0])
    return AnnotationResult(
        series_uid=doc.series_uid,
        source=HEADER_SOURCE,
        body_part=normalize_body_part(raw),
    )
