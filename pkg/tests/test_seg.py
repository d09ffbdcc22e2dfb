"""DICOM-SEG reading: frame mapping, labels, references."""

import numpy as np
import pytest

from dicomcurator.dicom_core import (
    MissingFrameMapping,
    NotASegmentation,
    UnsupportedSegmentationType,
    el,
    make_object,
    parse_seg,
)
from corpus import ct_instance, seg_object


def _mask(fill_rows):
    m = np.zeros((8, 8), dtype=np.uint8)
    for r in fill_rows:
        m[r, :] = 1
    return m


def test_parse_two_segments():
    m1, m2 = _mask([0, 1]), _mask([5])
    seg = seg_object(
        "1.9",
        "1.9.1",
        "1.2",
        [(1, "1.2.1", m1), (2, "1.2.1", m2)],
        labels={1: "Liver", 2: "Spleen"},
    )
    masks = parse_seg(seg)
    assert masks.rows == 8 and masks.columns == 8
    assert masks.referenced_series_uid == "1.2"
    assert masks.labels() == ("Liver", "Spleen")
    got1 = masks.segment(1)
    assert len(got1.frames) == 1
    assert got1.frames[0].referenced_sop_uid == "1.2.1"
    np.testing.assert_array_equal(got1.frames[0].mask, m1)
    np.testing.assert_array_equal(masks.segment(2).frames[0].mask, m2)


def test_label_falls_back_to_segment_n():
    seg = seg_object("1.9", "1.9.1", "1.2", [(3, "1.2.1", _mask([2]))])
    masks = parse_seg(seg)
    assert masks.labels() == ("segment_3",)
    assert masks.segment(3).label == "segment_3"


def test_frames_without_sop_reference_keep_none():
    seg = seg_object("1.9", "1.9.1", "1.2", [(1, None, _mask([1]))])
    masks = parse_seg(seg)
    assert masks.segment(1).frames[0].referenced_sop_uid is None


def test_missing_per_frame_groups_raises():
    seg = seg_object("1.9", "1.9.1", "1.2", [(1, "1.2.1", _mask([0])), (1, "1.2.2", _mask([1]))])
    # drop one per-frame item so counts disagree
    elements = []
    for e in seg.elements:
        if e.keyword == "PerFrameFunctionalGroupsSequence":
            elements.append(el("PerFrameFunctionalGroupsSequence", list(e.items()[0])))
        else:
            elements.append(e)
    broken = make_object(elements, pixels=seg.pixels)
    with pytest.raises(MissingFrameMapping):
        parse_seg(broken)


def test_non_binary_type_rejected():
    seg = seg_object("1.9", "1.9.1", "1.2", [(1, "1.2.1", _mask([0]))])
    elements = [
        el("SegmentationType", "FRACTIONAL") if e.keyword == "SegmentationType" else e
        for e in seg.elements
    ]
    with pytest.raises(UnsupportedSegmentationType):
        parse_seg(make_object(elements, pixels=seg.pixels))


def test_non_seg_modality_rejected():
    with pytest.raises(NotASegmentation):
        parse_seg(ct_instance("1.2", "1.2.1", 1))


def test_no_series_reference_is_none():
    seg = seg_object("1.9", "1.9.1", None, [(1, "1.2.1", _mask([0]))])
    masks = parse_seg(seg)
    assert masks.referenced_series_uid is None


def test_multiframe_packing_is_contiguous():
    # frame bits are packed end to end, not byte-aligned per frame
    m1 = np.zeros((3, 3), dtype=np.uint8)
    m1[0, 0] = 1
    m2 = np.ones((3, 3), dtype=np.uint8)
    seg = seg_object("1.9", "1.9.1", "1.2", [(1, "a", m1), (2, "b", m2)], rows=3, columns=3)
    assert len(seg.pixels.data) == (9 * 2 + 7) // 8
    masks = parse_seg(seg)
    np.testing.assert_array_equal(masks.segment(1).frames[0].mask, m1)
    np.testing.assert_array_equal(masks.segment(2).frames[0].mask, m2)
