"""API error vocabulary.

Every HTTP error body is {"code", "message", "details"} with a code
from the closed set below; the status is a pure function of the code.
"""

from __future__ import annotations

from typing import Optional


class ApiError(Exception):
    def __init__(self, code: str, message: str, details: Optional[dict] = None):
        if code not in STATUS_BY_CODE:
            raise ValueError(f"unknown api error code {code!r}")
        super().__init__(message)
        self.code = code
        self.message = message
        self.details = details or {}

    @property
    def status(self) -> int:
        return STATUS_BY_CODE[self.code]

    def body(self) -> dict:
        return {"code": self.code, "message": self.message,
                "details": self.details}


class PathNotFound(Exception):
    pass


STATUS_BY_CODE = {
    "parse_error": 422,
    "unknown_series": 404,
    "unknown_dataset": 404,
    "unknown_annotator": 404,
    "unknown_job": 404,
    "unknown_field": 404,
    "frame_out_of_range": 404,
    "duplicate_name": 409,
    "invalid_name": 400,
    "invalid_tag": 400,
    "overlapping_add_remove": 400,
    "invalid_request": 400,
    "path_not_found": 400,
    "annotator_failed": 502,
    "annotator_timeout": 504,
    "protocol_violation": 502,
    "internal_error": 500,
}
