"""Linear VOI windowing of rescaled pixel values to 8-bit gray."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..dicom_core import DicomObject, DicomTag, decode_frame, photometric


@dataclass(frozen=True)
class WindowSpec:
    """A VOI window; ``width`` must be greater than 1."""

    center: float
    width: float

    def __post_init__(self):
        if not self.width > 1:
            raise ValueError("window width must be > 1")


WINDOW_CENTER = DicomTag(0x0028, 0x1050)
WINDOW_WIDTH = DicomTag(0x0028, 0x1051)


def window_to_gray(values: np.ndarray, window: WindowSpec) -> np.ndarray:
    """Map rescaled values to gray levels 0..255.

    out = clamp(round(((v - (c - 0.5)) / (w - 1) + 0.5) * 255), 0, 255)
    with ties rounded away from zero toward +inf (round-half-up).
    """
    v = np.asarray(values, dtype=np.float64)
    scaled = ((v - (window.center - 0.5)) / (window.width - 1) + 0.5) * 255.0
    out = np.floor(scaled + 0.5)
    return np.clip(out, 0.0, 255.0).astype(np.uint8)


def _header_window(obj: DicomObject) -> Optional[WindowSpec]:
    center = obj.get_value(WINDOW_CENTER)
    width = obj.get_value(WINDOW_WIDTH)
    if center is None or width is None:
        return None
    try:
        c = float(center[0] if isinstance(center, tuple) else center)
        w = float(width[0] if isinstance(width, tuple) else width)
    except (TypeError, ValueError):
        return None
    if not w > 1:
        return None
    return WindowSpec(center=c, width=w)


def default_window(obj: DicomObject, frame: Optional[np.ndarray] = None) -> WindowSpec:
    """Window from headers when present and sane, else a full-range one.

    The fallback spans the frame's actual value range: center is the
    midpoint of (min, max) and width is max - min, floored at 2 so the
    WindowSpec width > 1 invariant holds even for constant frames.
    """
    spec = _header_window(obj)
    if spec is not None:
        return spec
    if frame is None:
        frame = decode_frame(obj, 0)
    lo = float(frame.min())
    hi = float(frame.max())
    return WindowSpec(center=(lo + hi) / 2.0, width=max(hi - lo, 2.0))


def gray_frame(obj: DicomObject, frame_index: int,
               window: Optional[WindowSpec] = None) -> np.ndarray:
    """Decode one frame and window it to uint8, inverting MONOCHROME1."""
    raw = decode_frame(obj, frame_index)
    spec = window or default_window(obj, raw)
    gray = window_to_gray(raw, spec)
    if photometric(obj) == "MONOCHROME1":
        gray = (255 - gray.astype(np.int16)).astype(np.uint8)
    return gray
