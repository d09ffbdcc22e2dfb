"""HTTP service wiring ingestion, search, thumbnails, datasets, annotators."""

from .app import create_app, to_api_error
from .config import CuratorConfig, load_config
from .engine import (
    CurationEngine,
    IngestReport,
    SeriesNotFound,
    SliceNotFound,
    UnknownAnnotator,
    UnknownJob,
)
from .errors import ApiError, PathNotFound, STATUS_BY_CODE
from .jobs import JobTable

__all__ = [
    "create_app",
    "to_api_error",
    "CuratorConfig",
    "load_config",
    "CurationEngine",
    "IngestReport",
    "ApiError",
    "PathNotFound",
    "STATUS_BY_CODE",
    "JobTable",
    "SeriesNotFound",
    "SliceNotFound",
    "UnknownAnnotator",
    "UnknownJob",
]
