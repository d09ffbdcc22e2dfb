"""Errors for annotation workflows."""

from __future__ import annotations


class AnnotatorError(Exception):
    code = "annotator_error"


class InvalidManifest(AnnotatorError):
    code = "invalid_manifest"


class UnreferencedSegmentation(AnnotatorError):
    code = "unreferenced_segmentation"


class AnnotatorFailed(AnnotatorError):
    code = "annotator_failed"

    def __init__(self, message: str, stderr: str = ""):
        super().__init__(message)
        self.stderr = stderr


class ProtocolViolation(AnnotatorError):
    code = "protocol_violation"


class Timeout(AnnotatorError):
    code = "annotator_timeout"
