"""RTStruct contour extraction."""

import numpy as np
import pytest

from dicomcurator.dicom_core import (
    MalformedContourData,
    NotAnRTStruct,
    el,
    make_object,
    parse_rtstruct,
)
from corpus import ct_instance, rtstruct_object

SQUARE = np.array(
    [[0.0, 0.0, 5.0], [10.0, 0.0, 5.0], [10.0, 10.0, 5.0], [0.0, 10.0, 5.0]]
)


def test_parse_named_rois():
    rt = rtstruct_object(
        "2.1",
        "2.1.1",
        "1.2",
        [
            {"number": 1, "name": "Liver", "color": (255, 0, 0), "contours": [SQUARE]},
            {"number": 4, "name": "Cord", "contours": []},
        ],
    )
    cs = parse_rtstruct(rt)
    assert cs.referenced_series_uid == "1.2"
    by_number = {r.roi_number: r for r in cs.rois}
    assert by_number[1].name == "Liver"
    assert by_number[1].color == (255, 0, 0)
    assert by_number[4].name == "Cord"
    contour = by_number[1].contours[0]
    assert len(contour.points) == 4
    assert contour.points[0] == (0.0, 0.0, 5.0)


def test_name_falls_back_to_roi_n():
    rt = rtstruct_object("2.1", "2.1.1", None, [{"number": 7, "contours": [SQUARE]}])
    cs = parse_rtstruct(rt)
    assert cs.rois[0].name == "ROI_7"


def test_non_multiple_of_three_raises():
    rt = rtstruct_object("2.1", "2.1.1", None, [{"number": 2, "contours": []}])
    elements = list(rt.elements)
    bad_contour = el(
        "ROIContourSequence",
        [
            el("ReferencedROINumber", 2),
            el(
                "ContourSequence",
                [
                    el("ContourGeometricType", "CLOSED_PLANAR"),
                    el("ContourData", "1.0", "2.0", "3.0", "4.0"),
                ],
            ),
        ],
    )
    elements = [bad_contour if e.keyword == "ROIContourSequence" else e for e in elements]
    with pytest.raises(MalformedContourData) as exc:
        parse_rtstruct(make_object(elements))
    assert exc.value.roi_number == 2


def test_non_numeric_contour_raises():
    rt = rtstruct_object("2.1", "2.1.1", None, [{"number": 3, "contours": []}])
    bad_contour = el(
        "ROIContourSequence",
        [
            el("ReferencedROINumber", 3),
            el(
                "ContourSequence",
                [
                    el("ContourGeometricType", "CLOSED_PLANAR"),
                    el("ContourData", "1.0", "oops", "3.0"),
                ],
            ),
        ],
    )
    elements = [bad_contour if e.keyword == "ROIContourSequence" else e for e in rt.elements]
    with pytest.raises(MalformedContourData):
        parse_rtstruct(make_object(elements))


def test_closed_planar_needs_three_points():
    rt = rtstruct_object(
        "2.1", "2.1.1", None, [{"number": 1, "contours": [SQUARE[:2]]}]
    )
    with pytest.raises(MalformedContourData):
        parse_rtstruct(rt)


def test_not_an_rtstruct():
    with pytest.raises(NotAnRTStruct):
        parse_rtstruct(ct_instance("1.2", "1.2.1", 1))


def test_round_trip_through_bytes():
    from dicomcurator.dicom_core import parse_bytes, serialize

    rt = rtstruct_object(
        "2.1", "2.1.1", "1.2", [{"number": 1, "name": "Liver", "contours": [SQUARE]}]
    )
    back = parse_bytes(serialize(rt))
    cs = parse_rtstruct(back)
    assert cs.rois[0].contours[0].points == tuple(
        (float(x), float(y), float(z)) for x, y, z in SQUARE
    )
