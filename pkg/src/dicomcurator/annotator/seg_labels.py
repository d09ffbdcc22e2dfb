"""Feeding DICOM-SEG segment labels into the search index."""

from __future__ import annotations

from typing import Iterable, Optional

from ..dicom_core import SegmentationMasks
from .errors import UnreferencedSegmentation


def ingest_seg_labels(index, seg: SegmentationMasks, series_uid: str,
                      known_sops: Optional[Iterable[str]] = None):
    """Union a segmentation's labels into a series' anatomical_structures.

    The SEG must reference the target series, either by series UID or
    (when it lacks a series-level reference) by at least one source
    instance UID from known_sops. Lowercased labels merge set-wise, so
    re-ingesting the same SEG is a no-op. Returns the updated document.
    """
    referenced = seg.referenced_series_uid
    if referenced is not None:
        if referenced != series_uid:
            raise UnreferencedSegmentation(
                f"segmentation references series {referenced}, not {series_uid}")
    else:
        frame_refs = {
            fr.referenced_sop_uid
            for segment in seg.segments
            for fr in segment.frames
            if fr.referenced_sop_uid
        }
        if not frame_refs:
            raise UnreferencedSegmentation(
                "segmentation carries no reference to the target series")
        if known_sops is not None and not (frame_refs & set(known_sops)):
            raise UnreferencedSegmentation(
                "segmentation references no known instance of the target series")

    doc = index.get_document(series_uid)
    if doc is None:
        raise UnreferencedSegmentation(f"series {series_uid} is not indexed")
    labels = {label.lower() for label in seg.labels() if label}
    merged = sorted(set(doc.anatomical_structures) | labels)
    index.set_structures(series_uid, merged)
    return index.get_document(series_uid)
