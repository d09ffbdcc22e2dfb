"""Contour rasterization onto axial pixel grids.

Polygons are filled with the even-odd scanline rule after rounding each
vertex half-up to integer pixel coordinates. Lattice points that fall
exactly on a polygon edge count as inside, which is what makes the
filled (0,0)-(10,10) square cover an 11x11 block instead of 10x10.
Scanline crossings use exact rational arithmetic so the result matches
a brute-force point-in-polygon check pixel for pixel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..dicom_core import ContourSet, DicomObject, DicomTag
from .errors import UnsupportedOrientation

IMAGE_POSITION = DicomTag(0x0020, 0x0032)
IMAGE_ORIENTATION = DicomTag(0x0020, 0x0037)
PIXEL_SPACING = DicomTag(0x0028, 0x0030)
SLICE_THICKNESS = DicomTag(0x0018, 0x0050)

AXIAL_IDENTITY = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0)
_ORIENTATION_TOL = 1e-4


@dataclass(frozen=True)
class SliceGeometry:
    """Placement of one axial slice in patient space.

    row_spacing is the distance between rows (PixelSpacing[0]) and
    col_spacing between columns (PixelSpacing[1]). z_tolerance is the
    half-thickness used to decide whether a contour lies on this slice.
    """

    origin: Tuple[float, float, float]
    row_spacing: float
    col_spacing: float
    rows: int
    columns: int
    orientation: Tuple[float, ...] = AXIAL_IDENTITY
    z_tolerance: float = 0.5


def round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def _check_axial(orientation: Sequence[float]):
    if len(orientation) != 6 or any(
            abs(a - b) > _ORIENTATION_TOL
            for a, b in zip(orientation, AXIAL_IDENTITY)):
        raise UnsupportedOrientation(
            "only axial identity orientation (1\\0\\0\\0\\1\\0) is supported")


def fill_polygon(mask: np.ndarray, vertices: Sequence[Tuple[int, int]]):
    """OR an even-odd filled polygon with integer (col,row) vertices into mask."""
    n = len(vertices)
    if n == 0:
        return
    rows, cols = mask.shape

    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]

    y_lo = max(0, min(v[1] for v in vertices))
    y_hi = min(rows - 1, max(v[1] for v in vertices))
    for y in range(y_lo, y_hi + 1):
        crossings = []
        for (x0, y0), (x1, y1) in edges:
            if y0 == y1:
                continue
            if min(y0, y1) <= y < max(y0, y1):
                crossings.append(
                    Fraction(x0) + Fraction(y - y0, y1 - y0) * (x1 - x0))
        crossings.sort()
        for i in range(0, len(crossings) - 1, 2):
            a, b = crossings[i], crossings[i + 1]
            # open interval: edge-exact lattice points come from the boundary pass
            start = max(0, int(a) + 1 if a.denominator == 1 else math.ceil(a))
            end = min(cols - 1, int(b) - 1 if b.denominator == 1 else math.floor(b))
            if start <= end:
                mask[y, start:end + 1] = 1

    for (x0, y0), (x1, y1) in edges:
        dx, dy = x1 - x0, y1 - y0
        steps = math.gcd(abs(dx), abs(dy))
        if steps == 0:
            points = [(x0, y0)]
        else:
            sx, sy = dx // steps, dy // steps
            points = [(x0 + k * sx, y0 + k * sy) for k in range(steps + 1)]
        for x, y in points:
            if 0 <= y < rows and 0 <= x < cols:
                mask[y, x] = 1


def rasterize_polygon(points_px: Sequence[Tuple[float, float]],
                      rows: int, columns: int) -> np.ndarray:
    """Fill one polygon given continuous (col,row) coordinates."""
    mask = np.zeros((rows, columns), dtype=np.uint8)
    vertices = [(round_half_up(c), round_half_up(r)) for c, r in points_px]
    fill_polygon(mask, vertices)
    return mask


def rasterize_contours(contours: ContourSet,
                       geometry: SliceGeometry) -> Dict[int, np.ndarray]:
    """Rasterize every ROI of a structure set onto one slice.

    Returns a mask per ROI number; ROIs with no contour on this slice
    get an all-zero mask rather than an error.
    """
    _check_axial(geometry.orientation)
    ox, oy, oz = geometry.origin
    masks: Dict[int, np.ndarray] = {}
    for roi in contours.rois:
        mask = np.zeros((geometry.rows, geometry.columns), dtype=np.uint8)
        for contour in roi.contours:
            if not contour.points:
                continue
            if abs(contour.points[0][2] - oz) > geometry.z_tolerance:
                continue
            vertices = [
                (round_half_up((x - ox) / geometry.col_spacing),
                 round_half_up((y - oy) / geometry.row_spacing))
                for x, y, _z in contour.points
            ]
            fill_polygon(mask, vertices)
        masks[roi.roi_number] = mask
    return masks


def _floats(values: tuple, count: int) -> Optional[Tuple[float, ...]]:
    try:
        out = tuple(float(v) for v in values)
    except (TypeError, ValueError):
        return None
    return out if len(out) == count else None


def geometry_from_instance(obj: DicomObject) -> Optional[SliceGeometry]:
    """Build slice geometry from an image instance's position headers."""
    if obj.pixels is None:
        return None
    origin = _floats(obj.get_values(IMAGE_POSITION), 3) or (0.0, 0.0, 0.0)
    spacing = _floats(obj.get_values(PIXEL_SPACING), 2) or (1.0, 1.0)
    orientation = _floats(obj.get_values(IMAGE_ORIENTATION), 6) or AXIAL_IDENTITY
    thickness = _floats(obj.get_values(SLICE_THICKNESS), 1)
    tolerance = thickness[0] / 2.0 if thickness and thickness[0] > 0 else 0.5
    descriptor = obj.pixels.descriptor
    return SliceGeometry(
        origin=origin,
        row_spacing=spacing[0],
        col_spacing=spacing[1],
        rows=descriptor.rows,
        columns=descriptor.columns,
        orientation=orientation,
        z_tolerance=tolerance,
    )
