"""Pixel access: raw frames plus modality rescale.

Grayscale only, 8 or 16 bits per sample.  1-bit data belongs to the
segmentation reader.  Rescaled output is int32 with half-up rounding so CT
Hounsfield values survive exactly.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .elements import DicomObject
from .errors import FrameOutOfRange, NoPixelData, UnsupportedPixelFormat
from .tags import T

RESCALE_INTERCEPT = T(0x0028, 0x1052)
RESCALE_SLOPE = T(0x0028, 0x1053)


def frame_count(obj: DicomObject) -> int:
    if obj.pixels is None:
        raise NoPixelData("object carries no decodable pixel data")
    return max(obj.pixels.descriptor.number_of_frames, 1)


def _dtype_for(bits: int, signed: bool):
    if bits == 8:
        return np.dtype("int8") if signed else np.dtype("uint8")
    if bits == 16:
        return np.dtype("<i2") if signed else np.dtype("<u2")
    raise UnsupportedPixelFormat(f"bits_allocated={bits} not supported here")


def raw_frame(obj: DicomObject, index: int) -> np.ndarray:
    """Stored values for one frame, shape (rows, columns), native signedness."""
    if obj.pixels is None:
        raise NoPixelData("object carries no decodable pixel data")
    desc = obj.pixels.descriptor
    if desc.samples_per_pixel != 1:
        raise UnsupportedPixelFormat(
            f"samples_per_pixel={desc.samples_per_pixel}; only grayscale is supported"
        )
    dtype = _dtype_for(desc.bits_allocated, desc.pixel_representation == 1)
    n = frame_count(obj)
    if not 0 <= index < n:
        raise FrameOutOfRange(f"frame {index} out of range [0, {n})")
    frame_bytes = desc.rows * desc.columns * dtype.itemsize
    start = index * frame_bytes
    chunk = obj.pixels.data[start : start + frame_bytes]
    if len(chunk) < frame_bytes:
        raise UnsupportedPixelFormat(
            f"pixel data holds {len(obj.pixels.data)} bytes, frame {index} needs "
            f"bytes [{start}, {start + frame_bytes})"
        )
    return np.frombuffer(chunk, dtype=dtype).reshape(desc.rows, desc.columns)


def rescale_parameters(obj: DicomObject) -> tuple[float, float]:
    """(slope, intercept); defaults (1.0, 0.0) when tags absent or unparsable."""

    def num(tag, default: float) -> float:
        v = obj.get_value(tag)
        if v is None:
            return default
        try:
            return float(v)
        except (TypeError, ValueError):
            return default

    return num(RESCALE_SLOPE, 1.0), num(RESCALE_INTERCEPT, 0.0)


def decode_frame(obj: DicomObject, index: int) -> np.ndarray:
    """One frame as int32 after modality rescale (half-up rounding)."""
    raw = raw_frame(obj, index)
    slope, intercept = rescale_parameters(obj)
    if slope == 1.0 and intercept == 0.0:
        return raw.astype(np.int32)
    scaled = raw.astype(np.float64) * slope + intercept
    return np.floor(scaled + 0.5).astype(np.int32)


def decode_all(obj: DicomObject) -> list[np.ndarray]:
    return [decode_frame(obj, i) for i in range(frame_count(obj))]


def photometric(obj: DicomObject) -> Optional[str]:
    if obj.pixels is None:
        return None
    return obj.pixels.descriptor.photometric
