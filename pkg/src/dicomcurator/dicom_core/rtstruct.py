"""RT Structure Set extraction: named ROIs with planar contours.

Contour points stay in patient space (mm); projecting them onto image
pixels is the renderer's job.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .elements import DataElement, DicomObject
from .errors import MalformedContourData, NotAnRTStruct
from .tags import DicomTag, MODALITY, T

STRUCTURE_SET_ROI_SEQUENCE = T(0x3006, 0x0020)
ROI_NUMBER = T(0x3006, 0x0022)
ROI_NAME = T(0x3006, 0x0026)
ROI_CONTOUR_SEQUENCE = T(0x3006, 0x0039)
ROI_DISPLAY_COLOR = T(0x3006, 0x002A)
CONTOUR_SEQUENCE = T(0x3006, 0x0040)
CONTOUR_GEOMETRIC_TYPE = T(0x3006, 0x0042)
CONTOUR_DATA = T(0x3006, 0x0050)
CONTOUR_IMAGE_SEQUENCE = T(0x3006, 0x0016)
REFERENCED_ROI_NUMBER = T(0x3006, 0x0084)
REFERENCED_SOP_INSTANCE_UID = T(0x0008, 0x1155)
REFERENCED_FRAME_OF_REFERENCE_SEQUENCE = T(0x3006, 0x0010)
RT_REFERENCED_STUDY_SEQUENCE = T(0x3006, 0x0012)
RT_REFERENCED_SERIES_SEQUENCE = T(0x3006, 0x0014)
SERIES_INSTANCE_UID = T(0x0020, 0x000E)


@dataclass(frozen=True)
class Contour:
    referenced_sop_uid: Optional[str]
    geometric_type: str
    points: tuple[tuple[float, float, float], ...]


@dataclass(frozen=True)
class Roi:
    roi_number: int
    name: str
    color: Optional[tuple[int, int, int]]
    contours: tuple[Contour, ...]


@dataclass(frozen=True)
class ContourSet:
    rois: tuple[Roi, ...]
    referenced_series_uid: Optional[str]

    def roi(self, number: int) -> Optional[Roi]:
        for r in self.rois:
            if r.roi_number == number:
                return r
        return None


def _first(elements: Iterable[DataElement], tag: DicomTag) -> Optional[DataElement]:
    for e in elements:
        if e.tag == tag:
            return e
    return None


def _items_of(container, tag: DicomTag):
    el = container.get(tag) if isinstance(container, DicomObject) else _first(container, tag)
    if el is None or el.vr != "SQ":
        return ()
    return el.items()


def _int_value(elements, tag: DicomTag) -> Optional[int]:
    el = _first(elements, tag)
    if el is None or el.first() is None:
        return None
    try:
        return int(str(el.first()))
    except ValueError:
        return None


def _contour_points(raw: tuple, roi_number: int) -> tuple[tuple[float, float, float], ...]:
    values = []
    for token in raw:
        try:
            values.append(float(str(token)))
        except ValueError:
            raise MalformedContourData(
                roi_number, f"non-numeric contour value {token!r}"
            ) from None
    if len(values) % 3 != 0:
        raise MalformedContourData(
            roi_number, f"{len(values)} contour values, not divisible by 3"
        )
    return tuple(
        (values[i], values[i + 1], values[i + 2]) for i in range(0, len(values), 3)
    )


def referenced_series_uid(obj: DicomObject) -> Optional[str]:
    for fr in _items_of(obj, REFERENCED_FRAME_OF_REFERENCE_SEQUENCE):
        for study in _items_of(fr, RT_REFERENCED_STUDY_SEQUENCE):
            for series in _items_of(study, RT_REFERENCED_SERIES_SEQUENCE):
                el = _first(series, SERIES_INSTANCE_UID)
                if el is not None and el.first() is not None:
                    return str(el.first())
    return None


def parse_rtstruct(obj: DicomObject) -> ContourSet:
    if obj.get_value(MODALITY) != "RTSTRUCT":
        raise NotAnRTStruct(
            f"Modality is {obj.get_value(MODALITY)!r}, expected 'RTSTRUCT'"
        )

    names: dict[int, str] = {}
    for item in _items_of(obj, STRUCTURE_SET_ROI_SEQUENCE):
        num = _int_value(item, ROI_NUMBER)
        if num is None or num in names:
            continue
        name_el = _first(item, ROI_NAME)
        name = str(name_el.first()) if name_el is not None and name_el.first() else ""
        names[num] = name or f"ROI_{num}"

    rois: list[Roi] = []
    seen: set[int] = set()
    for item in _items_of(obj, ROI_CONTOUR_SEQUENCE):
        num = _int_value(item, REFERENCED_ROI_NUMBER)
        if num is None or num in seen:
            continue
        seen.add(num)

        color: Optional[tuple[int, int, int]] = None
        color_el = _first(item, ROI_DISPLAY_COLOR)
        if color_el is not None and isinstance(color_el.value, tuple) and len(color_el.value) == 3:
            try:
                r, g, b = (int(str(c)) for c in color_el.value)
                color = (r, g, b)
            except ValueError:
                color = None

        contours: list[Contour] = []
        for c_item in _items_of(item, CONTOUR_SEQUENCE):
            data_el = _first(c_item, CONTOUR_DATA)
            if data_el is None or not isinstance(data_el.value, tuple):
                continue
            geo_el = _first(c_item, CONTOUR_GEOMETRIC_TYPE)
            geo = str(geo_el.first()) if geo_el is not None and geo_el.first() else "CLOSED_PLANAR"
            points = _contour_points(data_el.value, num)
            if geo == "CLOSED_PLANAR" and len(points) < 3:
                raise MalformedContourData(
                    num, f"CLOSED_PLANAR contour with {len(points)} points"
                )
            sop = None
            for img in _items_of(c_item, CONTOUR_IMAGE_SEQUENCE):
                sop_el = _first(img, REFERENCED_SOP_INSTANCE_UID)
                if sop_el is not None and sop_el.first() is not None:
                    sop = str(sop_el.first())
                    break
            contours.append(Contour(referenced_sop_uid=sop, geometric_type=geo, points=points))

        rois.append(
            Roi(
                roi_number=num,
                name=names.get(num, f"ROI_{num}"),
                color=color,
                contours=tuple(contours),
            )
        )

    rois.sort(key=lambda r: r.roi_number)
    return ContourSet(rois=tuple(rois), referenced_series_uid=referenced_series_uid(obj))
