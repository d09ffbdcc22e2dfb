"""Series document construction and per-instance merging."""

import pytest

from dicomcurator.dicom_core import T, el, make_object
from dicomcurator.metadata_index import (
    MissingSeriesUid,
    SeriesUidMismatch,
    doc_from_json,
    doc_to_json,
    merge_instance,
    to_document,
)
from dicomcurator.metadata_index.document import _field_key
from corpus import ct_instance


def test_kinds_follow_vr():
    obj = ct_instance("1.2", "1.2.1", 1, extra=[el("ImageComments", "free text here")])
    doc = to_document(obj, ingest_time=100.0)
    assert doc.fields["Modality"].kind == "kw"
    assert doc.fields["StudyDate"].kind == "date"
    assert doc.fields["StudyDate"].values == ("2024-01-15",)
    assert doc.fields["SliceThickness"].kind == "num"
    assert doc.fields["SliceThickness"].values == (1.0,)
    assert doc.fields["PatientName"].kind == "pn"
    assert doc.fields["ImageComments"].kind == "text"
    assert doc.fields["Rows"].kind == "num"


def test_identity_columns():
    doc = to_document(ct_instance("1.2", "1.2.1", 1), ingest_time=1.0)
    assert doc.series_uid == "1.2"
    assert doc.study_uid == "1.2.826.0.1.999.1"
    assert doc.patient_id == "P001"
    assert doc.modality == "CT"
    assert doc.instance_count == 1
    assert doc.has_pixel_data is True


def test_sequences_become_count_fields():
    obj = make_object(
        [
            el("SeriesInstanceUID", "1.2"),
            el(
                "ReferencedSeriesSequence",
                [el("SeriesInstanceUID", "9")],
                [el("SeriesInstanceUID", "8")],
            ),
        ]
    )
    doc = to_document(obj, ingest_time=1.0)
    assert doc.fields["ReferencedSeriesSequence_count"].values == (2.0,)


def test_reserved_names_get_dicom_suffix():
    assert _field_key("tags") == "tags_dicom"
    assert _field_key("Body_Part") == "Body_Part_dicom"
    assert _field_key("Modality") == "Modality"


def test_invalid_date_warns_and_drops():
    obj = ct_instance("1.2", "1.2.1", 1, study_date="20241399")
    doc = to_document(obj, ingest_time=1.0)
    assert "StudyDate" not in doc.fields
    assert any("StudyDate" in w for w in doc.warnings)


def test_private_tags_excluded():
    obj = ct_instance(
        "1.2", "1.2.1", 1, extra=[el(T(0x0009, 0x0001), b"\x00\x01", vr="OB")]
    )
    doc = to_document(obj, ingest_time=1.0)
    assert not any("0009" in k for k in doc.fields)


def test_missing_series_uid_raises():
    with pytest.raises(MissingSeriesUid):
        to_document(make_object([el("Modality", "CT")]))


def test_merge_counts_instances_and_keeps_first_scalar():
    doc = to_document(ct_instance("1.2", "1.2.1", 1, kernel="B30f"), ingest_time=1.0)
    merged = merge_instance(doc, ct_instance("1.2", "1.2.2", 2, kernel="B70f"))
    assert merged.instance_count == 2
    assert merged.fields["ConvolutionKernel"].values == ("B30f",)
    assert "ConvolutionKernel" in merged.field_conflicts
    # InstanceNumber differs too and is numeric: conflict recorded, first kept
    assert merged.fields["InstanceNumber"].values == (1.0,)


def test_merge_same_value_case_insensitive_no_conflict():
    doc = to_document(ct_instance("1.2", "1.2.1", 1, kernel="B30f"), ingest_time=1.0)
    merged = merge_instance(doc, ct_instance("1.2", "1.2.2", 2, kernel="b30F"))
    assert merged.fields["ConvolutionKernel"].values == ("B30f",)
    assert "ConvolutionKernel" not in merged.field_conflicts


def test_merge_multivalued_keyword_unions():
    a = ct_instance("1.2", "1.2.1", 1, extra=[el("ImageType", "ORIGINAL", "PRIMARY")])
    b = ct_instance("1.2", "1.2.2", 2, extra=[el("ImageType", "primary", "AXIAL")])
    merged = merge_instance(to_document(a, ingest_time=1.0), b)
    assert merged.fields["ImageType"].values == ("ORIGINAL", "PRIMARY", "AXIAL")
    assert "ImageType" not in merged.field_conflicts


def test_merge_rejects_other_series():
    doc = to_document(ct_instance("1.2", "1.2.1", 1), ingest_time=1.0)
    with pytest.raises(SeriesUidMismatch):
        merge_instance(doc, ct_instance("9.9", "9.9.1", 1))


def test_merge_fills_missing_identity():
    bare = make_object([el("SeriesInstanceUID", "1.2")])
    doc = to_document(bare, ingest_time=1.0)
    assert doc.modality == ""
    merged = merge_instance(doc, ct_instance("1.2", "1.2.2", 2))
    assert merged.modality == "CT"
    assert merged.patient_id == "P001"


def test_json_round_trip():
    doc = to_document(ct_instance("1.2", "1.2.1", 1), ingest_time=42.0)
    doc = merge_instance(doc, ct_instance("1.2", "1.2.2", 2, kernel="B70f"))
    back = doc_from_json(doc_to_json(doc))
    assert back == doc
