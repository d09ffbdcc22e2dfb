"""Auto-annotation: header normalization, SEG label ingestion, external tools."""

from importlib import resources

from .errors import (
    AnnotatorError,
    AnnotatorFailed,
    InvalidManifest,
    ProtocolViolation,
    Timeout,
    UnreferencedSegmentation,
)
from .external import (
    AnnotatorManifest,
    DEFAULT_TIMEOUT_S,
    load_manifest,
    manifest_from_dict,
    run_external,
)
from .headers import (
    AnnotationResult,
    BODY_PART_SYNONYMS,
    HEADER_SOURCE,
    annotate_from_headers,
    normalize_body_part,
)
from .seg_labels import ingest_seg_labels


def bundled_manifest_path(name: str = "totalsegmentator"):
    """Filesystem path of a manifest shipped with the package."""
    return resources.files(__package__) / "manifests" / f"{name}.manifest.json"


__all__ = [
    "AnnotationResult",
    "AnnotatorManifest",
    "BODY_PART_SYNONYMS",
    "HEADER_SOURCE",
    "DEFAULT_TIMEOUT_S",
    "annotate_from_headers",
    "normalize_body_part",
    "ingest_seg_labels",
    "load_manifest",
    "manifest_from_dict",
    "run_external",
    "bundled_manifest_path",
    "AnnotatorError",
    "InvalidManifest",
    "UnreferencedSegmentation",
    "AnnotatorFailed",
    "ProtocolViolation",
    "Timeout",
]
