"""Randomized comparison of the index against a per-document linear scan."""

import csv
import io
import random

import pytest

from dicomcurator.metadata_index import (
    FieldValue,
    MetadataIndex,
    SeriesDocument,
    export_csv,
    parse_query,
)
import corpus
import oracles


DOC_COUNT = 300
QUERY_COUNT = 60


@pytest.fixture(scope="module")
def indexed():
    rng = random.Random(1234)
    docs = [
        corpus.random_document(rng, f"1.2.826.0.1.{i}", i) for i in range(DOC_COUNT)
    ]
    idx = MetadataIndex()
    for doc in docs:
        idx.upsert(doc)
    return idx, docs


def test_random_queries_match_linear_scan(indexed):
    idx, docs = indexed
    rng = random.Random(99)
    for i in range(QUERY_COUNT):
        q = corpus.random_query(rng)
        node = parse_query(q)
        expected = oracles.linear_search(docs, node)
        res = idx.search(node, size=DOC_COUNT)
        got = {uid for uid, _ in res.hits}
        assert got == expected, f"query {i}: {q!r}"
        assert res.total == len(expected)


def test_default_ordering_matches_reference(indexed):
    idx, docs = indexed
    rng = random.Random(7)
    for _ in range(15):
        q = corpus.random_query(rng)
        node = parse_query(q)
        res = idx.search(node, size=DOC_COUNT)
        expected = oracles.default_order(docs, oracles.linear_search(docs, node))
        assert [uid for uid, _ in res.hits] == expected, q


def _reference_sorted(docs, uids, field, kind, descending):
    by_uid = {d.series_uid: d for d in docs}
    present = []
    missing = []
    for uid in sorted(uids):
        got = oracles._field_values(by_uid[uid], field.lower())
        if got is None or not got[1]:
            missing.append(uid)
            continue
        first = got[1][0]  # multi-valued fields sort on the first listed value
        key = float(first) if kind == "num" else str(first).casefold()
        present.append((key, uid))
    present.sort(key=lambda p: p[0], reverse=descending)
    return [uid for _, uid in present] + missing


@pytest.mark.parametrize(
    "field,kind",
    [("SliceThickness", "num"), ("ConvolutionKernel", "kw"), ("StudyDate", "date")],
)
def test_field_sort_contract(indexed, field, kind):
    # Docs carrying the field come first ordered by value, the rest keep the
    # uid-ascending tail, equal keys break ties by uid ascending.
    idx, docs = indexed
    node = parse_query("")
    all_uids = {d.series_uid for d in docs}
    for sort, descending in ((field, False), ("-" + field, True)):
        res = idx.search(node, size=DOC_COUNT, sort=sort)
        expected = _reference_sorted(docs, all_uids, field, kind, descending)
        assert [uid for uid, _ in res.hits] == expected, sort


@pytest.mark.parametrize(
    "field",
    ["Modality", "ConvolutionKernel", "Manufacturer", "BodyPartExamined", "tags",
     "anatomical_structures", "body_part", "PatientName", "ImageType"],
)
def test_keyword_facets_match_brute_force(indexed, field):
    idx, docs = indexed
    node = parse_query("")
    dist = idx.aggregate(node, [field])
    facet = dist.per_field[field]
    uids = {d.series_uid for d in docs}
    buckets, missing = oracles.facet_keyword_counts(docs, uids, field.lower())
    assert list(facet.buckets) == buckets
    assert facet.missing_count == missing


def test_facets_respect_query_scope(indexed):
    idx, docs = indexed
    node = parse_query("Modality:CT")
    dist = idx.aggregate(node, ["ConvolutionKernel"])
    uids = oracles.linear_search(docs, node)
    buckets, missing = oracles.facet_keyword_counts(docs, uids, "convolutionkernel")
    assert list(dist.per_field["ConvolutionKernel"].buckets) == buckets
    assert dist.per_field["ConvolutionKernel"].missing_count == missing


@pytest.mark.parametrize("field", ["SliceThickness", "instance_count"])
def test_number_facets_match_brute_force(indexed, field):
    idx, docs = indexed
    node = parse_query("")
    dist = idx.aggregate(node, [field])
    uids = {d.series_uid for d in docs}
    buckets, missing = oracles.facet_number_counts(docs, uids, field.lower())
    assert list(dist.per_field[field].buckets) == buckets
    assert dist.per_field[field].missing_count == missing


def test_wide_numeric_field_gets_binned():
    # More than 50 distinct values switches the facet to ten equal-width bins.
    rng = random.Random(5)
    idx = MetadataIndex()
    docs = []
    for i in range(120):
        doc = SeriesDocument(
            series_uid=f"9.8.{i}",
            study_uid="s",
            patient_id="p",
            modality="CT",
            fields={"ExposureTime": FieldValue("num", (round(rng.uniform(1, 900), 2),))},
            instance_count=1,
            has_pixel_data=True,
            tags=(),
            anatomical_structures=(),
            body_part=None,
            ingest_time=float(i),
        )
        docs.append(doc)
        idx.upsert(doc)
    dist = idx.aggregate(parse_query(""), ["ExposureTime"])
    facet = dist.per_field["ExposureTime"]
    buckets, missing = oracles.facet_number_counts(
        docs, {d.series_uid for d in docs}, "exposuretime"
    )
    assert list(facet.buckets) == buckets
    assert facet.missing_count == missing == 0
    assert all(label.startswith("[") and label.endswith(")") for label, _ in facet.buckets)
    assert sum(n for _, n in facet.buckets) >= 120  # every doc lands in a bin


def test_autocomplete_matches_brute_force(indexed):
    idx, docs = indexed
    rng = random.Random(21)
    fields = {
        "Modality": "kw",
        "ConvolutionKernel": "kw",
        "Manufacturer": "kw",
        "tags": "kw",
        "PatientName": "pn",
        "SliceThickness": "num",
    }
    prefixes = ["", "b", "c", "ca", "1", "s", "re", "z"]
    for _ in range(20):
        field = rng.choice(list(fields))
        prefix = rng.choice(prefixes)
        got = idx.autocomplete(field, prefix, 10)
        want = oracles.autocomplete_ref(docs, field.lower(), fields[field], prefix, 10)
        assert list(got) == want, (field, prefix)


def test_csv_export_parses_back_to_counts(indexed):
    idx, docs = indexed
    dist = idx.aggregate(parse_query(""), ["Manufacturer"])
    data = export_csv(dist, "Manufacturer")
    rows = list(csv.reader(io.StringIO(data.decode("utf-8"))))
    assert rows[0] == ["value", "count"]
    facet = dist.per_field["Manufacturer"]
    expected = [[v, str(n)] for v, n in facet.buckets]
    if facet.missing_count:
        expected.append(["__missing__", str(facet.missing_count)])
    assert rows[1:] == expected
    assert data.endswith(b"\n") and b"\r" not in data
