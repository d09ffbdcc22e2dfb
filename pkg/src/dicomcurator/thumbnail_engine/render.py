"""Series thumbnail rendering.

Everything here is a pure function of its inputs, so the same series
always produces byte-identical PNG output. make_thumbnail never raises:
series without pixel data get a modality placeholder card and decode
failures get an "ERR" card instead of breaking a gallery page.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..dicom_core import (
    DicomObject,
    DicomTag,
    frame_count,
    parse_rtstruct,
    parse_seg,
)
from .errors import DimensionMismatch, NoRenderableInstance
from .font5x7 import text_mask, text_size
from .png import encode_png
from .raster import geometry_from_instance, rasterize_contours
from .windowing import WindowSpec, gray_frame

MODALITY = DicomTag(0x0008, 0x0060)
INSTANCE_NUMBER = DicomTag(0x0020, 0x0013)

# distinct hues chosen to stay tellable-apart for common color blindness
DEFAULT_PALETTE = (
    (230, 25, 75),
    (60, 180, 75),
    (255, 225, 25),
    (0, 130, 200),
    (245, 130, 48),
    (145, 30, 180),
    (70, 240, 240),
    (240, 50, 230),
    (210, 245, 60),
    (170, 110, 40),
)

Rgb = Tuple[int, int, int]


@dataclass(frozen=True)
class ThumbnailConfig:
    edge: int = 128
    overlay_alpha: float = 0.5
    palette: Tuple[Rgb, ...] = DEFAULT_PALETTE
    background: Rgb = (0, 0, 0)

    def __post_init__(self):
        if not 32 <= self.edge <= 512:
            raise ValueError("edge must be within [32, 512]")
        if not 0.0 <= self.overlay_alpha <= 1.0:
            raise ValueError("overlay_alpha must be within [0, 1]")
        if not self.palette:
            raise ValueError("palette must not be empty")

    def config_hash(self) -> str:
        canon = repr((self.edge, self.overlay_alpha, self.palette, self.background))
        return hashlib.sha256(canon.encode("ascii")).hexdigest()[:12]


@dataclass(frozen=True)
class RgbImage:
    """Row-major 8-bit RGB pixels."""

    rows: int
    columns: int
    data: bytes

    def __post_init__(self):
        if len(self.data) != self.rows * self.columns * 3:
            raise ValueError("data length must be rows*columns*3")

    @classmethod
    def from_array(cls, array: np.ndarray) -> "RgbImage":
        array = np.ascontiguousarray(array, dtype=np.uint8)
        return cls(array.shape[0], array.shape[1], array.tobytes())

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.data, dtype=np.uint8).reshape(
            self.rows, self.columns, 3)


def cache_path(cache_dir, series_uid: str, cfg: ThumbnailConfig) -> Path:
    """Where the thumbnail for (series, config) lives on disk."""
    base = Path(cache_dir)
    return base / series_uid[:2] / f"{series_uid}_{cfg.config_hash()}.png"


def _instance_order_key(obj: DicomObject):
    number = obj.get_value(INSTANCE_NUMBER)
    if isinstance(number, tuple):
        number = number[0] if number else None
    try:
        number = int(str(number).strip())  # IS values arrive as strings
    except (TypeError, ValueError):
        number = math.inf
    return (number, obj.sop_instance_uid or "")


def sort_instances(instances: Sequence[DicomObject]) -> List[DicomObject]:
    return sorted(instances, key=_instance_order_key)


def select_slice(instances: Sequence[DicomObject]) -> Tuple[DicomObject, int]:
    """Median renderable instance and its middle frame (lower medians)."""
    renderable = sort_instances(
        obj for obj in instances if obj.pixels is not None)
    if not renderable:
        raise NoRenderableInstance("series has no instance with pixel data")
    chosen = renderable[(len(renderable) - 1) // 2]
    return chosen, (frame_count(chosen) - 1) // 2


def render_overlay(base: np.ndarray, masks: Mapping[int, np.ndarray],
                   cfg: ThumbnailConfig,
                   colors: Optional[Mapping[int, Rgb]] = None) -> RgbImage:
    """Blend segment masks over a gray slice.

    Segments composite in ascending number; each blends against the
    original gray, so overlaps show the highest-numbered segment alone.
    Explicit per-segment colors win over the palette.
    """
    base = np.asarray(base, dtype=np.uint8)
    rgb = np.repeat(base[:, :, np.newaxis], 3, axis=2).astype(np.float64)
    gray = base.astype(np.float64)
    alpha = cfg.overlay_alpha
    for number in sorted(masks):
        mask = np.asarray(masks[number])
        if mask.shape != base.shape:
            raise DimensionMismatch(
                f"mask {mask.shape} does not match base {base.shape}")
        color = None
        if colors is not None:
            color = colors.get(number)
        if color is None:
            color = cfg.palette[(number - 1) % len(cfg.palette)]
        where = mask > 0
        for channel in range(3):
            blended = (1.0 - alpha) * gray[where] + alpha * color[channel]
            rgb[:, :, channel][where] = np.floor(blended + 0.5)
    return RgbImage.from_array(np.clip(rgb, 0, 255).astype(np.uint8))


def _gray_to_rgb(base: np.ndarray) -> np.ndarray:
    return np.repeat(np.asarray(base, np.uint8)[:, :, np.newaxis], 3, axis=2)


def _resize_letterbox(image: np.ndarray, cfg: ThumbnailConfig) -> np.ndarray:
    """Nearest-neighbor fit into edge x edge, centered on background."""
    rows, cols = image.shape[:2]
    edge = cfg.edge
    longest = max(rows, cols)
    out_r = max(1, rows * edge // longest)
    out_c = max(1, cols * edge // longest)
    src_r = (np.arange(out_r) * rows) // out_r
    src_c = (np.arange(out_c) * cols) // out_c
    scaled = image[src_r][:, src_c]
    canvas = np.empty((edge, edge, 3), dtype=np.uint8)
    canvas[:, :] = cfg.background
    top = (edge - out_r) // 2
    left = (edge - out_c) // 2
    canvas[top:top + out_r, left:left + out_c] = scaled
    return canvas


def _placeholder(lines: Sequence[str], cfg: ThumbnailConfig) -> bytes:
    edge = cfg.edge
    canvas = np.empty((edge, edge, 3), dtype=np.uint8)
    canvas[:, :] = cfg.background
    lines = [line or "?" for line in lines]
    budget = edge - 8
    # one glyph row of gap between lines, uniform scale across lines
    scale = max(1, min(
        min(budget // text_size(line)[1] for line in lines),
        budget // (8 * len(lines) - 1),
    ))
    total_h = (8 * len(lines) - 1) * scale
    y = (edge - total_h) // 2
    for line in lines:
        mask = text_mask(line, scale)
        x = (edge - mask.shape[1]) // 2
        region = canvas[y:y + mask.shape[0], x:x + mask.shape[1]]
        region[mask] = (255, 255, 255)
        y += 8 * scale
    return encode_png(canvas)


def _series_modality(instances: Sequence[DicomObject]) -> str:
    for obj in instances:
        value = obj.get_value(MODALITY)
        if isinstance(value, tuple):
            value = value[0] if value else None
        if isinstance(value, str) and value.strip():
            return value.strip().upper()
    return "?"


def _seg_overlay(ordered, by_sop, related):
    masks = parse_seg(related)
    per_slice: Dict[Optional[str], Dict[int, np.ndarray]] = {}
    for segment in masks.segments:
        for fr in segment.frames:
            bucket = per_slice.setdefault(fr.referenced_sop_uid, {})
            if segment.segment_number in bucket:
                bucket[segment.segment_number] = np.maximum(
                    bucket[segment.segment_number], fr.mask)
            else:
                bucket[segment.segment_number] = fr.mask
    best = None
    for sop, slice_masks in per_slice.items():
        if sop is not None and sop not in by_sop:
            continue
        area = sum(int(m.sum()) for m in slice_masks.values())
        if area == 0:
            continue
        if sop is None:
            position = (len(ordered) - 1) // 2
        else:
            position = by_sop[sop]
        if best is None or (area, -position) > (best[0], -best[1]):
            best = (area, position, slice_masks)
    if best is None:
        return None
    instance = ordered[best[1]]
    return instance, (frame_count(instance) - 1) // 2, best[2], None


def _rtstruct_overlay(ordered, related):
    contour_set = parse_rtstruct(related)
    contour_zs = {
        contour.points[0][2]
        for roi in contour_set.rois
        for contour in roi.contours
        if contour.points
    }
    if not contour_zs:
        return None
    colors = {
        roi.roi_number: roi.color
        for roi in contour_set.rois if roi.color is not None
    }
    best = None
    for position, obj in enumerate(ordered):
        geometry = geometry_from_instance(obj)
        if geometry is None:
            continue
        z = geometry.origin[2]
        if not any(abs(cz - z) <= geometry.z_tolerance for cz in contour_zs):
            continue
        masks = rasterize_contours(contour_set, geometry)
        masks = {k: m for k, m in masks.items() if m.any()}
        area = sum(int(m.sum()) for m in masks.values())
        if area == 0:
            continue
        if best is None or (area, -position) > (best[0], -best[1]):
            best = (area, position, masks)
    if best is None:
        return None
    instance = ordered[best[1]]
    return instance, (frame_count(instance) - 1) // 2, best[2], colors


def _choose_overlay(ordered, related):
    by_sop = {
        obj.sop_instance_uid: i
        for i, obj in enumerate(ordered) if obj.sop_instance_uid
    }
    for rel in related:
        value = rel.get_value(MODALITY)
        if isinstance(value, tuple):
            value = value[0] if value else None
        modality = (value or "").strip().upper()
        try:
            if modality == "SEG":
                found = _seg_overlay(ordered, by_sop, rel)
            elif modality == "RTSTRUCT":
                found = _rtstruct_overlay(ordered, rel)
            else:
                continue
        except Exception:
            continue
        if found is not None:
            return found
    return None


def make_thumbnail(instances: Sequence[DicomObject],
                   related: Sequence[DicomObject] = (),
                   cfg: Optional[ThumbnailConfig] = None,
                   window: Optional[WindowSpec] = None) -> bytes:
    """Render one series to PNG bytes; never raises."""
    cfg = cfg or ThumbnailConfig()
    modality = _series_modality(instances)
    ordered = sort_instances(obj for obj in instances if obj.pixels is not None)
    if not ordered:
        return _placeholder([modality], cfg)
    try:
        overlay = _choose_overlay(ordered, related)
        if overlay is not None:
            base_obj, frame_index, masks, colors = overlay
        else:
            base_obj, frame_index = select_slice(ordered)
            masks, colors = None, None
        gray = gray_frame(base_obj, frame_index, window)
        if masks:
            try:
                rgb = render_overlay(gray, masks, cfg, colors).to_array()
            except DimensionMismatch:
                rgb = _gray_to_rgb(gray)
        else:
            rgb = _gray_to_rgb(gray)
        return encode_png(_resize_letterbox(rgb, cfg))
    except Exception:
        return _placeholder(["ERR", modality], cfg)
