"""Named datasets, series membership, and bulk tagging with durable storage."""

from .errors import (
    DuplicateName,
    InvalidName,
    InvalidTag,
    OverlappingAddRemove,
    StoreError,
    UnknownDataset,
)
from .store import (
    DatasetRecord,
    DatasetStore,
    DatasetSummary,
    TagAssignment,
    TagOutcome,
    normalize_tag,
)

__all__ = [
    "DatasetStore",
    "DatasetRecord",
    "DatasetSummary",
    "TagAssignment",
    "TagOutcome",
    "normalize_tag",
    "StoreError",
    "InvalidName",
    "DuplicateName",
    "UnknownDataset",
    "OverlappingAddRemove",
    "InvalidTag",
]
