"""Errors for dataset and tag management."""

from __future__ import annotations


class StoreError(Exception):
    code = "store_error"


class InvalidName(StoreError):
    code = "invalid_name"


class DuplicateName(StoreError):
    code = "duplicate_name"


class UnknownDataset(StoreError):
    code = "unknown_dataset"


class OverlappingAddRemove(StoreError):
    code = "overlapping_add_remove"


class InvalidTag(StoreError):
    code = "invalid_tag"
