"""Exception types raised by the DICOM parsing layer."""


class DicomError(Exception):
    """Base class for all DICOM parsing/decoding errors."""

    code = "dicom_error"


class MalformedPreamble(DicomError):
    """No 128-byte preamble + DICM magic, and the lenient headerless
    fallback did not recognize the first bytes as a plausible element."""

    code = "malformed_preamble"


class TruncatedElement(DicomError):
    """A data element's declared length runs past the end of the input,
    or the element header itself is structurally unreadable."""

    code = "truncated_element"

    def __init__(self, offset: int, message: str = ""):
        self.offset = offset
        super().__init__(message or f"truncated element at byte offset {offset}")


class UnsupportedTransferSyntax(DicomError):
    """Transfer syntax other than Explicit/Implicit VR Little Endian.

    ``parse_file`` does not raise this: it returns a metadata-only object
    flagged ``unsupported_transfer_syntax``.  The serializer raises it when
    asked to emit an unsupported syntax.
    """

    code = "unsupported_transfer_syntax"


class NoPixelData(DicomError):
    code = "no_pixel_data"


class FrameOutOfRange(DicomError):
    code = "frame_out_of_range"


class UnsupportedPixelFormat(DicomError):
    code = "unsupported_pixel_format"


class NotASegmentation(DicomError):
    code = "not_a_segmentation"


class UnsupportedSegmentationType(DicomError):
    code = "unsupported_segmentation_type"


class MissingFrameMapping(DicomError):
    code = "missing_frame_mapping"


class NotAnRTStruct(DicomError):
    code = "not_an_rtstruct"


class MalformedContourData(DicomError):
    code = "malformed_contour_data"

    def __init__(self, roi_number, message: str = ""):
        self.roi_number = roi_number
        super().__init__(message or f"malformed contour data in ROI {roi_number}")


class NotNifti(DicomError):
    code = "not_nifti"


class UnsupportedDatatype(DicomError):
    code = "unsupported_datatype"


class UnsupportedDims(DicomError):
    code = "unsupported_dims"
