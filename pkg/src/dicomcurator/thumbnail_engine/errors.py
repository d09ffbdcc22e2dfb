"""Errors raised by thumbnail rendering building blocks.

make_thumbnail itself never raises: anything going wrong inside the
pipeline degrades to a placeholder card so one broken series cannot take
down a gallery page.
"""

from __future__ import annotations


class ThumbnailError(Exception):
    code = "thumbnail_error"


class NoRenderableInstance(ThumbnailError):
    code = "no_renderable_instance"


class DimensionMismatch(ThumbnailError):
    code = "dimension_mismatch"


class UnsupportedOrientation(ThumbnailError):
    code = "unsupported_orientation"


class PlaceholderFallback(ThumbnailError):
    """Signals that rendering fell back to an "ERR" placeholder card."""

    code = "placeholder_fallback"
