"""Deterministic series thumbnails: windowed slices, overlays, placeholders."""

from .errors import (
    DimensionMismatch,
    NoRenderableInstance,
    PlaceholderFallback,
    ThumbnailError,
    UnsupportedOrientation,
)
from .png import PngFormatError, decode_png, encode_png
from .raster import (
    SliceGeometry,
    fill_polygon,
    geometry_from_instance,
    rasterize_contours,
    rasterize_polygon,
    round_half_up,
)
from .render import (
    DEFAULT_PALETTE,
    RgbImage,
    ThumbnailConfig,
    cache_path,
    make_thumbnail,
    render_overlay,
    select_slice,
    sort_instances,
)
from .windowing import WindowSpec, default_window, gray_frame, window_to_gray

__all__ = [
    "ThumbnailError",
    "NoRenderableInstance",
    "DimensionMismatch",
    "UnsupportedOrientation",
    "PlaceholderFallback",
    "WindowSpec",
    "ThumbnailConfig",
    "RgbImage",
    "SliceGeometry",
    "DEFAULT_PALETTE",
    "window_to_gray",
    "default_window",
    "gray_frame",
    "select_slice",
    "sort_instances",
    "render_overlay",
    "rasterize_contours",
    "rasterize_polygon",
    "fill_polygon",
    "round_half_up",
    "geometry_from_instance",
    "make_thumbnail",
    "cache_path",
    "encode_png",
    "decode_png",
    "PngFormatError",
]
