"""Desk-scale DICOM curation engine.

Parses DICOM files without external toolkits, indexes series metadata into
an in-process searchable index, renders gallery thumbnails (including
segmentation overlays), manages datasets and tags, and exposes everything
through an HTTP API and a CLI.
"""

__version__ = "0.1.0"
