"""DICOM tag type and the bundled data dictionary.

The dictionary covers the patient/study/series/equipment/image modules plus
the segmentation (0062,xxxx) and RT structure set (3006,xxxx) groups — the
tags this tool indexes and renders.  Everything else falls back to a
synthetic ``unknown_GGGG_EEEE`` keyword with VR "UN".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True, order=True)
class DicomTag:
    """A (group, element) pair.  Ordering is lexicographic on the pair."""

    group: int
    element: int

    def __str__(self) -> str:
        return f"({self.group:04X},{self.element:04X})"

    @property
    def is_private(self) -> bool:
        return self.group % 2 == 1


class TagInfo(NamedTuple):
    keyword: str
    vr: str


def T(group: int, element: int) -> DicomTag:
    """Shorthand constructor, handy in tables and tests."""
    return DicomTag(group, element)


# Tags referenced by name throughout the package.
TRANSFER_SYNTAX_UID = T(0x0002, 0x0010)
SPECIFIC_CHARACTER_SET = T(0x0008, 0x0005)
SOP_CLASS_UID = T(0x0008, 0x0016)
SOP_INSTANCE_UID = T(0x0008, 0x0018)
MODALITY = T(0x0008, 0x0060)
STUDY_INSTANCE_UID = T(0x0020, 0x000D)
SERIES_INSTANCE_UID = T(0x0020, 0x000E)
INSTANCE_NUMBER = T(0x0020, 0x0013)
PIXEL_DATA = T(0x7FE0, 0x0010)

ITEM = T(0xFFFE, 0xE000)
ITEM_DELIMITER = T(0xFFFE, 0xE00D)
SEQUENCE_DELIMITER = T(0xFFFE, 0xE0DD)


_DICTIONARY: dict[tuple[int, int], TagInfo] = {
    # File meta (group 0002)
    (0x0002, 0x0000): TagInfo("FileMetaInformationGroupLength", "UL"),
    (0x0002, 0x0001): TagInfo("FileMetaInformationVersion", "OB"),
    (0x0002, 0x0002): TagInfo("MediaStorageSOPClassUID", "UI"),
    (0x0002, 0x0003): TagInfo("MediaStorageSOPInstanceUID", "UI"),
    (0x0002, 0x0010): TagInfo("TransferSyntaxUID", "UI"),
    (0x0002, 0x0012): TagInfo("ImplementationClassUID", "UI"),
    (0x0002, 0x0013): TagInfo("ImplementationVersionName", "SH"),
    (0x0002, 0x0016): TagInfo("SourceApplicationEntityTitle", "AE"),
    # Identification / study (group 0008)
    (0x0008, 0x0005): TagInfo("SpecificCharacterSet", "CS"),
    (0x0008, 0x0008): TagInfo("ImageType", "CS"),
    (0x0008, 0x0012): TagInfo("InstanceCreationDate", "DA"),
    (0x0008, 0x0013): TagInfo("InstanceCreationTime", "TM"),
    (0x0008, 0x0014): TagInfo("InstanceCreatorUID", "UI"),
    (0x0008, 0x0016): TagInfo("SOPClassUID", "UI"),
    (0x0008, 0x0018): TagInfo("SOPInstanceUID", "UI"),
    (0x0008, 0x0020): TagInfo("StudyDate", "DA"),
    (0x0008, 0x0021): TagInfo("SeriesDate", "DA"),
    (0x0008, 0x0022): TagInfo("AcquisitionDate", "DA"),
    (0x0008, 0x0023): TagInfo("ContentDate", "DA"),
    (0x0008, 0x002A): TagInfo("AcquisitionDateTime", "DT"),
    (0x0008, 0x0030): TagInfo("StudyTime", "TM"),
    (0x0008, 0x0031): TagInfo("SeriesTime", "TM"),
    (0x0008, 0x0032): TagInfo("AcquisitionTime", "TM"),
    (0x0008, 0x0033): TagInfo("ContentTime", "TM"),
    (0x0008, 0x0050): TagInfo("AccessionNumber", "SH"),
    (0x0008, 0x0054): TagInfo("RetrieveAETitle", "AE"),
    (0x0008, 0x0056): TagInfo("InstanceAvailability", "CS"),
    (0x0008, 0x0060): TagInfo("Modality", "CS"),
    (0x0008, 0x0061): TagInfo("ModalitiesInStudy", "CS"),
    (0x0008, 0x0064): TagInfo("ConversionType", "CS"),
    (0x0008, 0x0068): TagInfo("PresentationIntentType", "CS"),
    (0x0008, 0x0070): TagInfo("Manufacturer", "LO"),
    (0x0008, 0x0080): TagInfo("InstitutionName", "LO"),
    (0x0008, 0x0081): TagInfo("InstitutionAddress", "ST"),
    (0x0008, 0x0090): TagInfo("ReferringPhysicianName", "PN"),
    (0x0008, 0x0100): TagInfo("CodeValue", "SH"),
    (0x0008, 0x0102): TagInfo("CodingSchemeDesignator", "SH"),
    (0x0008, 0x0103): TagInfo("CodingSchemeVersion", "SH"),
    (0x0008, 0x0104): TagInfo("CodeMeaning", "LO"),
    (0x0008, 0x0201): TagInfo("TimezoneOffsetFromUTC", "SH"),
    (0x0008, 0x1010): TagInfo("StationName", "SH"),
    (0x0008, 0x1030): TagInfo("StudyDescription", "LO"),
    (0x0008, 0x1032): TagInfo("ProcedureCodeSequence", "SQ"),
    (0x0008, 0x103E): TagInfo("SeriesDescription", "LO"),
    (0x0008, 0x1040): TagInfo("InstitutionalDepartmentName", "LO"),
    (0x0008, 0x1048): TagInfo("PhysiciansOfRecord", "PN"),
    (0x0008, 0x1050): TagInfo("PerformingPhysicianName", "PN"),
    (0x0008, 0x1060): TagInfo("NameOfPhysicianReadingStudy", "PN"),
    (0x0008, 0x1070): TagInfo("OperatorsName", "PN"),
    (0x0008, 0x1080): TagInfo("AdmittingDiagnosesDescription", "LO"),
    (0x0008, 0x1090): TagInfo("ManufacturerModelName", "LO"),
    (0x0008, 0x1110): TagInfo("ReferencedStudySequence", "SQ"),
    (0x0008, 0x1111): TagInfo("ReferencedPerformedProcedureStepSequence", "SQ"),
    (0x0008, 0x1115): TagInfo("ReferencedSeriesSequence", "SQ"),
    (0x0008, 0x1140): TagInfo("ReferencedImageSequence", "SQ"),
    (0x0008, 0x1150): TagInfo("ReferencedSOPClassUID", "UI"),
    (0x0008, 0x1155): TagInfo("ReferencedSOPInstanceUID", "UI"),
    (0x0008, 0x2111): TagInfo("DerivationDescription", "ST"),
    (0x0008, 0x2112): TagInfo("SourceImageSequence", "SQ"),
    (0x0008, 0x2218): TagInfo("AnatomicRegionSequence", "SQ"),
    (0x0008, 0x3010): TagInfo("IrradiationEventUID", "UI"),
    (0x0008, 0x9007): TagInfo("FrameType", "CS"),
    (0x0008, 0x9124): TagInfo("DerivationImageSequence", "SQ"),
    (0x0008, 0x9205): TagInfo("PixelPresentation", "CS"),
    # Patient (group 0010)
    (0x0010, 0x0010): TagInfo("PatientName", "PN"),
    (0x0010, 0x0020): TagInfo("PatientID", "LO"),
    (0x0010, 0x0021): TagInfo("IssuerOfPatientID", "LO"),
    (0x0010, 0x0030): TagInfo("PatientBirthDate", "DA"),
    (0x0010, 0x0032): TagInfo("PatientBirthTime", "TM"),
    (0x0010, 0x0040): TagInfo("PatientSex", "CS"),
    (0x0010, 0x1000): TagInfo("OtherPatientIDs", "LO"),
    (0x0010, 0x1001): TagInfo("OtherPatientNames", "PN"),
    (0x0010, 0x1010): TagInfo("PatientAge", "AS"),
    (0x0010, 0x1020): TagInfo("PatientSize", "DS"),
    (0x0010, 0x1030): TagInfo("PatientWeight", "DS"),
    (0x0010, 0x1040): TagInfo("PatientAddress", "LO"),
    (0x0010, 0x2110): TagInfo("Allergies", "LO"),
    (0x0010, 0x2160): TagInfo("EthnicGroup", "SH"),
    (0x0010, 0x21B0): TagInfo("AdditionalPatientHistory", "LT"),
    (0x0010, 0x21C0): TagInfo("PregnancyStatus", "US"),
    (0x0010, 0x4000): TagInfo("PatientComments", "LT"),
    # De-identification (group 0012)
    (0x0012, 0x0062): TagInfo("PatientIdentityRemoved", "CS"),
    (0x0012, 0x0063): TagInfo("DeidentificationMethod", "LO"),
    # Acquisition (group 0018)
    (0x0018, 0x0010): TagInfo("ContrastBolusAgent", "LO"),
    (0x0018, 0x0015): TagInfo("BodyPartExamined", "CS"),
    (0x0018, 0x0020): TagInfo("ScanningSequence", "CS"),
    (0x0018, 0x0021): TagInfo("SequenceVariant", "CS"),
    (0x0018, 0x0022): TagInfo("ScanOptions", "CS"),
    (0x0018, 0x0023): TagInfo("MRAcquisitionType", "CS"),
    (0x0018, 0x0024): TagInfo("SequenceName", "SH"),
    (0x0018, 0x0025): TagInfo("AngioFlag", "CS"),
    (0x0018, 0x0050): TagInfo("SliceThickness", "DS"),
    (0x0018, 0x0060): TagInfo("KVP", "DS"),
    (0x0018, 0x0080): TagInfo("RepetitionTime", "DS"),
    (0x0018, 0x0081): TagInfo("EchoTime", "DS"),
    (0x0018, 0x0082): TagInfo("InversionTime", "DS"),
    (0x0018, 0x0083): TagInfo("NumberOfAverages", "DS"),
    (0x0018, 0x0084): TagInfo("ImagingFrequency", "DS"),
    (0x0018, 0x0085): TagInfo("ImagedNucleus", "SH"),
    (0x0018, 0x0086): TagInfo("EchoNumbers", "IS"),
    (0x0018, 0x0087): TagInfo("MagneticFieldStrength", "DS"),
    (0x0018, 0x0088): TagInfo("SpacingBetweenSlices", "DS"),
    (0x0018, 0x0090): TagInfo("DataCollectionDiameter", "DS"),
    (0x0018, 0x0091): TagInfo("EchoTrainLength", "IS"),
    (0x0018, 0x0093): TagInfo("PercentSampling", "DS"),
    (0x0018, 0x0094): TagInfo("PercentPhaseFieldOfView", "DS"),
    (0x0018, 0x0095): TagInfo("PixelBandwidth", "DS"),
    (0x0018, 0x1000): TagInfo("DeviceSerialNumber", "LO"),
    (0x0018, 0x1020): TagInfo("SoftwareVersions", "LO"),
    (0x0018, 0x1030): TagInfo("ProtocolName", "LO"),
    (0x0018, 0x1100): TagInfo("ReconstructionDiameter", "DS"),
    (0x0018, 0x1110): TagInfo("DistanceSourceToDetector", "DS"),
    (0x0018, 0x1111): TagInfo("DistanceSourceToPatient", "DS"),
    (0x0018, 0x1120): TagInfo("GantryDetectorTilt", "DS"),
    (0x0018, 0x1130): TagInfo("TableHeight", "DS"),
    (0x0018, 0x1140): TagInfo("RotationDirection", "CS"),
    (0x0018, 0x1150): TagInfo("ExposureTime", "IS"),
    (0x0018, 0x1151): TagInfo("XRayTubeCurrent", "IS"),
    (0x0018, 0x1152): TagInfo("Exposure", "IS"),
    (0x0018, 0x1160): TagInfo("FilterType", "SH"),
    (0x0018, 0x1164): TagInfo("ImagerPixelSpacing", "DS"),
    (0x0018, 0x1170): TagInfo("GeneratorPower", "IS"),
    (0x0018, 0x1190): TagInfo("FocalSpots", "DS"),
    (0x0018, 0x1210): TagInfo("ConvolutionKernel", "SH"),
    (0x0018, 0x1250): TagInfo("ReceiveCoilName", "SH"),
    (0x0018, 0x1251): TagInfo("TransmitCoilName", "SH"),
    (0x0018, 0x1310): TagInfo("AcquisitionMatrix", "US"),
    (0x0018, 0x1312): TagInfo("InPlanePhaseEncodingDirection", "CS"),
    (0x0018, 0x1314): TagInfo("FlipAngle", "DS"),
    (0x0018, 0x1316): TagInfo("SAR", "DS"),
    (0x0018, 0x1318): TagInfo("dBdt", "DS"),
    (0x0018, 0x5100): TagInfo("PatientPosition", "CS"),
    (0x0018, 0x5101): TagInfo("ViewPosition", "CS"),
    # Relationship (group 0020)
    (0x0020, 0x000D): TagInfo("StudyInstanceUID", "UI"),
    (0x0020, 0x000E): TagInfo("SeriesInstanceUID", "UI"),
    (0x0020, 0x0010): TagInfo("StudyID", "SH"),
    (0x0020, 0x0011): TagInfo("SeriesNumber", "IS"),
    (0x0020, 0x0012): TagInfo("AcquisitionNumber", "IS"),
    (0x0020, 0x0013): TagInfo("InstanceNumber", "IS"),
    (0x0020, 0x0020): TagInfo("PatientOrientation", "CS"),
    (0x0020, 0x0032): TagInfo("ImagePositionPatient", "DS"),
    (0x0020, 0x0037): TagInfo("ImageOrientationPatient", "DS"),
    (0x0020, 0x0052): TagInfo("FrameOfReferenceUID", "UI"),
    (0x0020, 0x0060): TagInfo("Laterality", "CS"),
    (0x0020, 0x1002): TagInfo("ImagesInAcquisition", "IS"),
    (0x0020, 0x1040): TagInfo("PositionReferenceIndicator", "LO"),
    (0x0020, 0x1041): TagInfo("SliceLocation", "DS"),
    (0x0020, 0x1208): TagInfo("NumberOfStudyRelatedInstances", "IS"),
    (0x0020, 0x1209): TagInfo("NumberOfSeriesRelatedInstances", "IS"),
    (0x0020, 0x4000): TagInfo("ImageComments", "LT"),
    (0x0020, 0x9056): TagInfo("StackID", "SH"),
    (0x0020, 0x9057): TagInfo("InStackPositionNumber", "UL"),
    (0x0020, 0x9111): TagInfo("FrameContentSequence", "SQ"),
    (0x0020, 0x9113): TagInfo("PlanePositionSequence", "SQ"),
    (0x0020, 0x9116): TagInfo("PlaneOrientationSequence", "SQ"),
    (0x0020, 0x9157): TagInfo("DimensionIndexValues", "UL"),
    # Image presentation (group 0028)
    (0x0028, 0x0002): TagInfo("SamplesPerPixel", "US"),
    (0x0028, 0x0004): TagInfo("PhotometricInterpretation", "CS"),
    (0x0028, 0x0006): TagInfo("PlanarConfiguration", "US"),
    (0x0028, 0x0008): TagInfo("NumberOfFrames", "IS"),
    (0x0028, 0x0010): TagInfo("Rows", "US"),
    (0x0028, 0x0011): TagInfo("Columns", "US"),
    (0x0028, 0x0030): TagInfo("PixelSpacing", "DS"),
    (0x0028, 0x0034): TagInfo("PixelAspectRatio", "IS"),
    (0x0028, 0x0100): TagInfo("BitsAllocated", "US"),
    (0x0028, 0x0101): TagInfo("BitsStored", "US"),
    (0x0028, 0x0102): TagInfo("HighBit", "US"),
    (0x0028, 0x0103): TagInfo("PixelRepresentation", "US"),
    (0x0028, 0x0106): TagInfo("SmallestImagePixelValue", "US"),
    (0x0028, 0x0107): TagInfo("LargestImagePixelValue", "US"),
    (0x0028, 0x0120): TagInfo("PixelPaddingValue", "US"),
    (0x0028, 0x0301): TagInfo("BurnedInAnnotation", "CS"),
    (0x0028, 0x1050): TagInfo("WindowCenter", "DS"),
    (0x0028, 0x1051): TagInfo("WindowWidth", "DS"),
    (0x0028, 0x1052): TagInfo("RescaleIntercept", "DS"),
    (0x0028, 0x1053): TagInfo("RescaleSlope", "DS"),
    (0x0028, 0x1054): TagInfo("RescaleType", "LO"),
    (0x0028, 0x1055): TagInfo("WindowCenterWidthExplanation", "LO"),
    (0x0028, 0x2110): TagInfo("LossyImageCompression", "CS"),
    (0x0028, 0x2112): TagInfo("LossyImageCompressionRatio", "DS"),
    # Study scheduling (groups 0032/0040)
    (0x0032, 0x000A): TagInfo("StudyStatusID", "CS"),
    (0x0032, 0x1032): TagInfo("RequestingPhysician", "PN"),
    (0x0032, 0x1060): TagInfo("RequestedProcedureDescription", "LO"),
    (0x0040, 0x0244): TagInfo("PerformedProcedureStepStartDate", "DA"),
    (0x0040, 0x0245): TagInfo("PerformedProcedureStepStartTime", "TM"),
    (0x0040, 0x0253): TagInfo("PerformedProcedureStepID", "SH"),
    (0x0040, 0x0254): TagInfo("PerformedProcedureStepDescription", "LO"),
    (0x0040, 0xA040): TagInfo("ValueType", "CS"),
    (0x0040, 0xA043): TagInfo("ConceptNameCodeSequence", "SQ"),
    (0x0040, 0xA160): TagInfo("TextValue", "UT"),
    (0x0040, 0xA730): TagInfo("ContentSequence", "SQ"),
    # NM/PET (group 0054)
    (0x0054, 0x0081): TagInfo("NumberOfSlices", "US"),
    (0x0054, 0x1000): TagInfo("SeriesType", "CS"),
    (0x0054, 0x1001): TagInfo("Units", "CS"),
    # Segmentation (group 0062)
    (0x0062, 0x0001): TagInfo("SegmentationType", "CS"),
    (0x0062, 0x0002): TagInfo("SegmentSequence", "SQ"),
    (0x0062, 0x0003): TagInfo("SegmentedPropertyCategoryCodeSequence", "SQ"),
    (0x0062, 0x0004): TagInfo("SegmentNumber", "US"),
    (0x0062, 0x0005): TagInfo("SegmentLabel", "LO"),
    (0x0062, 0x0006): TagInfo("SegmentDescription", "ST"),
    (0x0062, 0x0008): TagInfo("SegmentAlgorithmType", "CS"),
    (0x0062, 0x0009): TagInfo("SegmentAlgorithmName", "LO"),
    (0x0062, 0x000A): TagInfo("SegmentIdentificationSequence", "SQ"),
    (0x0062, 0x000B): TagInfo("ReferencedSegmentNumber", "US"),
    (0x0062, 0x000D): TagInfo("RecommendedDisplayCIELabValue", "US"),
    (0x0062, 0x000F): TagInfo("SegmentedPropertyTypeCodeSequence", "SQ"),
    # RT structure set (group 3006)
    (0x3006, 0x0002): TagInfo("StructureSetLabel", "SH"),
    (0x3006, 0x0004): TagInfo("StructureSetName", "LO"),
    (0x3006, 0x0006): TagInfo("StructureSetDescription", "ST"),
    (0x3006, 0x0008): TagInfo("StructureSetDate", "DA"),
    (0x3006, 0x0009): TagInfo("StructureSetTime", "TM"),
    (0x3006, 0x0010): TagInfo("ReferencedFrameOfReferenceSequence", "SQ"),
    (0x3006, 0x0012): TagInfo("RTReferencedStudySequence", "SQ"),
    (0x3006, 0x0014): TagInfo("RTReferencedSeriesSequence", "SQ"),
    (0x3006, 0x0016): TagInfo("ContourImageSequence", "SQ"),
    (0x3006, 0x0020): TagInfo("StructureSetROISequence", "SQ"),
    (0x3006, 0x0022): TagInfo("ROINumber", "IS"),
    (0x3006, 0x0024): TagInfo("ReferencedFrameOfReferenceUID", "UI"),
    (0x3006, 0x0026): TagInfo("ROIName", "LO"),
    (0x3006, 0x0028): TagInfo("ROIDescription", "ST"),
    (0x3006, 0x002A): TagInfo("ROIDisplayColor", "IS"),
    (0x3006, 0x0036): TagInfo("ROIGenerationAlgorithm", "CS"),
    (0x3006, 0x0039): TagInfo("ROIContourSequence", "SQ"),
    (0x3006, 0x0040): TagInfo("ContourSequence", "SQ"),
    (0x3006, 0x0042): TagInfo("ContourGeometricType", "CS"),
    (0x3006, 0x0046): TagInfo("NumberOfContourPoints", "IS"),
    (0x3006, 0x0048): TagInfo("ContourNumber", "IS"),
    (0x3006, 0x0050): TagInfo("ContourData", "DS"),
    (0x3006, 0x0080): TagInfo("RTROIObservationsSequence", "SQ"),
    (0x3006, 0x0082): TagInfo("ObservationNumber", "IS"),
    (0x3006, 0x0084): TagInfo("ReferencedROINumber", "IS"),
    (0x3006, 0x0085): TagInfo("ROIObservationLabel", "SH"),
    (0x3006, 0x00A4): TagInfo("RTROIInterpretedType", "CS"),
    (0x3006, 0x00A6): TagInfo("ROIInterpreter", "PN"),
    # Multi-frame functional groups (group 5200)
    (0x5200, 0x9229): TagInfo("SharedFunctionalGroupsSequence", "SQ"),
    (0x5200, 0x9230): TagInfo("PerFrameFunctionalGroupsSequence", "SQ"),
    # Pixel data (group 7FE0)
    (0x7FE0, 0x0010): TagInfo("PixelData", "OW"),
}

_KEYWORD_TO_TAG: dict[str, DicomTag] = {
    info.keyword: DicomTag(g, e) for (g, e), info in _DICTIONARY.items()
}


def lookup_tag(tag: DicomTag) -> TagInfo:
    """Keyword and VR for a tag; unknown tags get a synthetic keyword.

    Total function: never raises.
    """
    info = _DICTIONARY.get((tag.group, tag.element))
    if info is not None:
        return info
    return TagInfo(f"unknown_{tag.group:04X}_{tag.element:04X}", "UN")


def tag_for_keyword(keyword: str) -> DicomTag | None:
    return _KEYWORD_TO_TAG.get(keyword)


def dictionary_size() -> int:
    return len(_DICTIONARY)
