"""Errors raised by the document/index layer."""

from __future__ import annotations


class IndexError_(Exception):
    """Base class; trailing underscore avoids shadowing the builtin."""

    code = "index_error"


class MissingSeriesUid(IndexError_):
    code = "missing_series_uid"


class SeriesUidMismatch(IndexError_):
    code = "series_uid_mismatch"


class UnknownSeries(IndexError_):
    code = "unknown_series"


class FieldNotInDistribution(IndexError_):
    code = "field_not_in_distribution"
