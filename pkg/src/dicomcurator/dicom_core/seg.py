"""DICOM-SEG extraction: bit-packed BINARY frames into per-segment masks.

Bits unpack least-significant-bit first within each byte; frames map to
segments (and to the source instance they were derived from) through the
per-frame functional group sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .elements import DataElement, DicomObject
from .errors import MissingFrameMapping, NotASegmentation, UnsupportedSegmentationType
from .tags import DicomTag, MODALITY, T

SEGMENTATION_TYPE = T(0x0062, 0x0001)
SEGMENT_SEQUENCE = T(0x0062, 0x0002)
SEGMENT_NUMBER = T(0x0062, 0x0004)
SEGMENT_LABEL = T(0x0062, 0x0005)
SEGMENT_IDENTIFICATION_SEQUENCE = T(0x0062, 0x000A)
REFERENCED_SEGMENT_NUMBER = T(0x0062, 0x000B)
PER_FRAME_GROUPS = T(0x5200, 0x9230)
DERIVATION_IMAGE_SEQUENCE = T(0x0008, 0x9124)
SOURCE_IMAGE_SEQUENCE = T(0x0008, 0x2112)
REFERENCED_SOP_INSTANCE_UID = T(0x0008, 0x1155)
REFERENCED_SERIES_SEQUENCE = T(0x0008, 0x1115)
SERIES_INSTANCE_UID = T(0x0020, 0x000E)


@dataclass(frozen=True, eq=False)
class SegFrame:
    referenced_sop_uid: Optional[str]
    mask: np.ndarray  # uint8, shape (rows, columns), values 0/1


@dataclass(frozen=True, eq=False)
class Segment:
    segment_number: int
    label: str
    frames: tuple[SegFrame, ...]


@dataclass(frozen=True, eq=False)
class SegmentationMasks:
    rows: int
    columns: int
    segments: tuple[Segment, ...]
    referenced_series_uid: Optional[str]

    def segment(self, number: int) -> Optional[Segment]:
        for s in self.segments:
            if s.segment_number == number:
                return s
        return None

    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.segments)


def unpack_bits(data: bytes, count: Optional[int] = None) -> np.ndarray:
    """LSB-first unpack: byte 0xB1 yields [1,0,0,0,1,1,0,1]."""
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    if count is not None:
        bits = bits[:count]
    return bits


def pack_bits(bits: Sequence[int]) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little").tobytes()


def _first(elements: Iterable[DataElement], tag: DicomTag) -> Optional[DataElement]:
    for e in elements:
        if e.tag == tag:
            return e
    return None


def _items_of(container, tag: DicomTag) -> tuple[tuple[DataElement, ...], ...]:
    el = container.get(tag) if isinstance(container, DicomObject) else _first(container, tag)
    if el is None or el.vr != "SQ":
        return ()
    return el.items()


def _frame_segment_number(item: tuple[DataElement, ...]) -> Optional[int]:
    for ident in _items_of(item, SEGMENT_IDENTIFICATION_SEQUENCE):
        el = _first(ident, REFERENCED_SEGMENT_NUMBER)
        if el is not None and el.first() is not None:
            try:
                return int(el.first())  # type: ignore[arg-type]
            except (TypeError, ValueError):
                return None
    return None

def _frame_source_sop(item: tuple[DataElement, ...]) -> Optional[str]:
    for deriv in _items_of(item, DERIVATION_IMAGE_SEQUENCE):
        for src in _items_of(deriv, SOURCE_IMAGE_SEQUENCE):
            el = _first(src, REFERENCED_SOP_INSTANCE_UID)
            if el is not None and el.first() is not None:
                return str(el.first())
    return None


def referenced_series_uid(obj: DicomObject) -> Optional[str]:
    for item in _items_of(obj, REFERENCED_SERIES_SEQUENCE):
        el = _first(item, SERIES_INSTANCE_UID)
        if el is not None and el.first() is not None:
            return str(el.first())
    return None


def parse_seg(obj: DicomObject) -> SegmentationMasks:
    if obj.get_value(MODALITY) != "SEG":
        raise NotASegmentation(f"Modality is {obj.get_value(MODALITY)!r}, expected 'SEG'")
    seg_type = obj.get_value(SEGMENTATION_TYPE)
    if seg_type != "BINARY":
        raise UnsupportedSegmentationType(
            f"SegmentationType {seg_type!r} not supported; only BINARY"
        )
    if obj.pixels is None:
        raise NotASegmentation("segmentation carries no pixel data")
    desc = obj.pixels.descriptor
    if desc.bits_allocated != 1:
        raise UnsupportedSegmentationType(
            f"bits_allocated={desc.bits_allocated}, BINARY requires 1"
        )

    rows, cols = desc.rows, desc.columns
    n_frames = max(desc.number_of_frames, 1)
    frame_bits = rows * cols
    bits = unpack_bits(obj.pixels.data, n_frames * frame_bits)
    if bits.size < n_frames * frame_bits:
        raise UnsupportedSegmentationType(
            f"pixel data holds {bits.size} bits, {n_frames} frames need "
            f"{n_frames * frame_bits}"
        )

    per_frame = _items_of(obj, PER_FRAME_GROUPS)
    if len(per_frame) != n_frames:
        raise MissingFrameMapping(
            f"{n_frames} frames but {len(per_frame)} per-frame functional group items"
        )

    labels: dict[int, str] = {}
    for item in _items_of(obj, SEGMENT_SEQUENCE):
        num_el = _first(item, SEGMENT_NUMBER)
        if num_el is None or num_el.first() is None:
            continue
        try:
            num = int(num_el.first())  # type: ignore[arg-type]
        except (TypeError, ValueError):
            continue
        if num in labels:
            continue  # first declaration wins
        label_el = _first(item, SEGMENT_LABEL)
        label = str(label_el.first()) if label_el is not None and label_el.first() else ""
        labels[num] = label or f"segment_{num}"

    grouped: dict[int, list[SegFrame]] = {}
    for i, item in enumerate(per_frame):
        seg_num = _frame_segment_number(item)
        if seg_num is None:
            raise MissingFrameMapping(f"frame {i} has no referenced segment number")
        mask = bits[i * frame_bits : (i + 1) * frame_bits].reshape(rows, cols)
        grouped.setdefault(seg_num, []).append(
            SegFrame(referenced_sop_uid=_frame_source_sop(item), mask=mask)
        )

    numbers = sorted(set(labels) | set(grouped))
    segments = tuple(
        Segment(
            segment_number=n,
            label=labels.get(n, f"segment_{n}"),
            frames=tuple(grouped.get(n, ())),
        )
        for n in numbers
    )
    return SegmentationMasks(
        rows=rows,
        columns=cols,
        segments=segments,
        referenced_series_uid=referenced_series_uid(obj),
    )
