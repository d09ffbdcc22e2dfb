"""DICOM parsing, serialization, pixel access, SEG/RTStruct/NIfTI readers."""

from .elements import (
    DataElement,
    DicomObject,
    EXPLICIT_VR_LE,
    FLAG_CHARSET_UNVERIFIED,
    FLAG_DUPLICATE_TAGS,
    FLAG_NO_FILE_META,
    FLAG_NO_PREAMBLE,
    FLAG_PIXEL_DESCRIPTOR_INCOMPLETE,
    FLAG_UNSUPPORTED_TRANSFER_SYNTAX,
    IMPLICIT_VR_LE,
    PixelDescriptor,
    PixelPayload,
    el,
    format_ds,
    make_object,
)
from .errors import (
    DicomError,
    FrameOutOfRange,
    MalformedContourData,
    MalformedPreamble,
    MissingFrameMapping,
    NoPixelData,
    NotAnRTStruct,
    NotASegmentation,
    NotNifti,
    TruncatedElement,
    UnsupportedDatatype,
    UnsupportedDims,
    UnsupportedPixelFormat,
    UnsupportedSegmentationType,
    UnsupportedTransferSyntax,
)
from .nifti import nifti_to_dicom
from .parser import parse_bytes, parse_file
from .pixels import (
    decode_all,
    decode_frame,
    frame_count,
    photometric,
    raw_frame,
    rescale_parameters,
)
from .rtstruct import Contour, ContourSet, Roi, parse_rtstruct
from .seg import SegFrame, Segment, SegmentationMasks, pack_bits, parse_seg, unpack_bits
from .tags import DicomTag, T, TagInfo, lookup_tag, tag_for_keyword
from .writer import serialize

__all__ = [
    "DataElement",
    "DicomObject",
    "DicomTag",
    "T",
    "TagInfo",
    "PixelDescriptor",
    "PixelPayload",
    "SegFrame",
    "Segment",
    "SegmentationMasks",
    "Contour",
    "ContourSet",
    "Roi",
    "EXPLICIT_VR_LE",
    "IMPLICIT_VR_LE",
    "FLAG_CHARSET_UNVERIFIED",
    "FLAG_DUPLICATE_TAGS",
    "FLAG_NO_FILE_META",
    "FLAG_NO_PREAMBLE",
    "FLAG_PIXEL_DESCRIPTOR_INCOMPLETE",
    "FLAG_UNSUPPORTED_TRANSFER_SYNTAX",
    "el",
    "format_ds",
    "make_object",
    "parse_bytes",
    "parse_file",
    "serialize",
    "lookup_tag",
    "tag_for_keyword",
    "decode_all",
    "decode_frame",
    "frame_count",
    "photometric",
    "raw_frame",
    "rescale_parameters",
    "parse_seg",
    "unpack_bits",
    "pack_bits",
    "parse_rtstruct",
    "nifti_to_dicom",
    "DicomError",
    "MalformedPreamble",
    "TruncatedElement",
    "UnsupportedTransferSyntax",
    "NoPixelData",
    "FrameOutOfRange",
    "UnsupportedPixelFormat",
    "NotASegmentation",
    "UnsupportedSegmentationType",
    "MissingFrameMapping",
    "NotAnRTStruct",
    "MalformedContourData",
    "NotNifti",
    "UnsupportedDatatype",
    "UnsupportedDims",
]
