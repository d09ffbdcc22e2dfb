"""Engine and HTTP API behavior over a small mixed corpus."""

import json
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from dicomcurator.curation_service import create_app
from dicomcurator.dicom_core import serialize
from dicomcurator.thumbnail_engine import decode_png
from corpus import ct_instance, seg_object


def _write_corpus(src):
    """Two CT series, one SEG referencing the first, one junk file."""
    src.mkdir(parents=True, exist_ok=True)
    for i in range(1, 4):
        obj = ct_instance("1.2.10", f"1.2.10.{i}", i, body_part="THORAX")
        (src / f"a{i}.dcm").write_bytes(serialize(obj))
    for i in range(1, 3):
        obj = ct_instance(
            "1.2.20", f"1.2.20.{i}", i, patient_id="P2", kernel="B70f"
        )
        (src / f"b{i}.dcm").write_bytes(serialize(obj))
    (src / "junk.txt").write_text("not dicom at all")
    mask = np.zeros((32, 32), dtype=np.uint8)
    mask[8:24, 8:24] = 1
    seg = seg_object(
        "1.2.30", "1.2.30.1", "1.2.10",
        frames=[(1, "1.2.10.2", mask)],
        labels={1: "Lower lung lobe"},
    )
    (src / "seg.dcm").write_bytes(serialize(seg))


@pytest.fixture
def populated(engine, tmp_path):
    src = tmp_path / "incoming"
    _write_corpus(src)
    report = engine.ingest_directory(src)
    return engine, src, report


@pytest.fixture
def client(populated):
    engine, _, _ = populated
    return TestClient(create_app(engine), raise_server_exceptions=False)


def test_ingest_report(populated):
    _, _, report = populated
    assert report.scanned == 7
    assert report.instances == 6
    assert report.indexed_series == 3
    assert len(report.skipped) == 1
    path, reason = report.skipped[0]
    assert path.endswith("junk.txt")
    assert reason == "malformed_preamble"


def test_reingest_is_idempotent(populated):
    engine, src, _ = populated
    before = engine.search_json("", size=100)
    report = engine.ingest_directory(src)
    assert report.indexed_series == 3
    after = engine.search_json("", size=100)
    assert before["total"] == after["total"] == 3


def test_search_and_aggregate(populated):
    engine, _, _ = populated
    assert engine.search_json("Modality:CT")["total"] == 2
    res = engine.search_json("ConvolutionKernel:B70f")
    assert res["total"] == 1
    assert res["hits"][0]["series_uid"] == "1.2.20"
    agg = engine.aggregate_json("", ["Modality"])
    buckets = {
        b["value"]: b["count"] for b in agg["fields"]["Modality"]["buckets"]
    }
    assert buckets == {"CT": 2, "SEG": 1}
    assert engine.aggregate_csv("", "Modality") == b"value,count\nCT,2\nSEG,1\n"


def test_thumbnail_overlay_and_cache(populated):
    engine, _, _ = populated
    png = engine.thumbnail_png("1.2.10")
    arr = decode_png(png)
    assert arr.shape == (128, 128, 3)
    nongray = (arr[..., 0] != arr[..., 1]) | (arr[..., 1] != arr[..., 2])
    assert nongray.any()  # SEG overlay tints the referenced slice
    assert engine.thumbnail_png("1.2.10") == png  # cache hit, byte identical
    assert engine.slice_count("1.2.10") == 3
    assert decode_png(engine.slice_png("1.2.10", 0)).shape == (32, 32, 3)


def test_datasets_and_tags(populated):
    engine, _, _ = populated
    ds = engine.create_dataset_json("lung Study")
    engine.modify_membership_json(ds["id"], ["1.2.10"], [])
    assert engine.get_dataset_json(ds["id"])["series"] == ["1.2.10"]
    report = engine.bulk_tag_json(["1.2.10", "1.2.20", "nope"], ["reviewed"], [])
    assert [r["status"] for r in report["report"]] == [
        "ok", "ok", "unknown_series",
    ]
    assert engine.search_json("tags:reviewed")["total"] == 2
    fsck = engine.fsck_json()
    assert fsck["dangling_memberships"] == []
    assert fsck["dangling_tags"] == []


def test_bundled_annotator_listed(populated):
    engine, _, _ = populated
    annotators = engine.list_annotators_json()["annotators"]
    assert any(
        a["name"] == "totalsegmentator" and a["label_count"] == 104
        for a in annotators
    )


def test_http_search_matches_engine(populated, client):
    engine, _, _ = populated
    r = client.get("/api/series", params={"q": "Modality:CT", "from": 0, "size": 20})
    assert r.status_code == 200
    direct = engine.search_json("Modality:CT", from_=0, size=20)
    assert json.dumps(r.json(), sort_keys=True) == json.dumps(direct, sort_keys=True)


def test_http_document_and_images(populated, client):
    engine, _, _ = populated
    r = client.get("/api/series/1.2.10")
    assert r.status_code == 200
    assert r.json()["series_uid"] == "1.2.10"
    assert r.json()["instance_count"] == 3
    assert r.json()["slice_count"] == 3

    png = engine.thumbnail_png("1.2.10")
    r = client.get("/api/series/1.2.10/thumbnail.png")
    assert r.status_code == 200
    assert r.headers["content-type"] == "image/png"
    assert r.content == png

    r = client.get("/api/series/1.2.10/slices/0.png")
    assert r.content == engine.slice_png("1.2.10", 0)


def test_http_error_codes(client):
    r = client.get("/api/series/unknown-uid/thumbnail.png")
    assert (r.status_code, r.json()["code"]) == (404, "unknown_series")

    r = client.get("/api/series", params={"q": "(a OR"})
    assert (r.status_code, r.json()["code"]) == (422, "parse_error")
    assert r.json()["details"]["position"] == 5
    assert r.json()["details"]["expected"]

    r = client.get("/api/series", params={"q": "", "size": 5000})
    assert (r.status_code, r.json()["code"]) == (400, "invalid_request")

    r = client.get("/api/series/1.2.10/slices/99.png")
    assert (r.status_code, r.json()["code"]) == (404, "frame_out_of_range")

    r = client.patch("/api/datasets/zzz/series", json={"add": ["x"], "remove": []})
    assert (r.status_code, r.json()["code"]) == (404, "unknown_dataset")

    r = client.post("/api/annotators/nope/run", json={"series_uids": ["1.2.10"]})
    assert (r.status_code, r.json()["code"]) == (404, "unknown_annotator")

    r = client.get("/api/jobs/nope")
    assert (r.status_code, r.json()["code"]) == (404, "unknown_job")

    r = client.get("/api/aggregate", params={"q": "", "fields": ""})
    assert (r.status_code, r.json()["code"]) == (400, "invalid_request")

    r = client.get("/api/aggregate.csv", params={"q": "", "field": "Nope"})
    assert (r.status_code, r.json()["code"]) == (404, "unknown_field")

    r = client.post("/api/ingest", json={"path": "/does/not/exist"})
    assert (r.status_code, r.json()["code"]) == (400, "path_not_found")


def test_http_dataset_flow(client):
    r = client.post("/api/datasets", json={"name": "lung Study"})
    assert r.status_code == 200
    ds_id = r.json()["id"]

    r = client.post("/api/datasets", json={"name": "LUNG study"})
    assert (r.status_code, r.json()["code"]) == (409, "duplicate_name")
    r = client.post("/api/datasets", json={"name": ""})
    assert (r.status_code, r.json()["code"]) == (400, "invalid_name")

    r = client.get("/api/datasets")
    assert [d["name"] for d in r.json()["datasets"]] == ["lung Study"]

    r = client.patch(
        f"/api/datasets/{ds_id}/series", json={"add": ["1.2.20"], "remove": []}
    )
    assert r.json() == {"added": 1, "removed": 0, "ignored": 0}
    r = client.patch(
        f"/api/datasets/{ds_id}/series", json={"add": ["x"], "remove": ["x"]}
    )
    assert (r.status_code, r.json()["code"]) == (400, "overlapping_add_remove")


def test_http_tags_and_autocomplete(client):
    r = client.post(
        "/api/tags/bulk",
        json={"uids": ["1.2.10"], "add": ["Reviewed", "qc:pass"], "remove": []},
    )
    assert r.status_code == 200
    assert r.json()["report"][0]["tags"] == ["qc:pass", "reviewed"]

    r = client.post("/api/tags/bulk", json={"uids": [], "add": ["x"], "remove": []})
    assert (r.status_code, r.json()["code"]) == (400, "invalid_request")

    r = client.post(
        "/api/tags/bulk", json={"uids": ["1.2.10"], "add": ["BAD!"], "remove": []}
    )
    assert (r.status_code, r.json()["code"]) == (400, "invalid_tag")

    r = client.get(
        "/api/autocomplete", params={"field": "ConvolutionKernel", "prefix": "b"}
    )
    values = [c["value"] for c in r.json()["completions"]]
    assert values == ["B30f", "B70f"]


def test_http_csv_parity(populated, client):
    engine, _, _ = populated
    r = client.get("/api/aggregate.csv", params={"q": "", "field": "Modality"})
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("text/csv")
    assert r.content == engine.aggregate_csv("", "Modality")


def test_http_ingest_endpoint(engine, tmp_path):
    src = tmp_path / "batch"
    _write_corpus(src)
    client = TestClient(create_app(engine), raise_server_exceptions=False)
    r = client.post("/api/ingest", json={"path": str(src)})
    assert r.status_code == 200
    assert r.json()["instances"] == 6
    assert client.get("/api/series", params={"q": ""}).json()["total"] == 3


def _wait_for_job(client, job_id, timeout_s=10.0):
    deadline = time.monotonic() + timeout_s
    while time.monotonic() < deadline:
        job = client.get(f"/api/jobs/{job_id}").json()
        if job["status"] in ("done", "failed"):
            return job
        time.sleep(0.05)
    raise AssertionError("job did not settle in time")


def test_annotator_job_end_to_end(annotated_engine, tmp_path):
    src = tmp_path / "incoming"
    _write_corpus(src)
    annotated_engine.ingest_directory(src)
    client = TestClient(create_app(annotated_engine), raise_server_exceptions=False)

    hits = client.get(
        "/api/series", params={"q": "Modality:CT", "size": 100}
    ).json()["hits"]
    uids = [h["series_uid"] for h in hits]
    r = client.post("/api/annotators/mockseg/run", json={"series_uids": uids})
    assert r.status_code == 200
    job = _wait_for_job(client, r.json()["job_id"])
    assert job["status"] == "done", job
    entries = job["result"]["entries"]
    assert len(entries) == 2
    for entry in entries:
        assert entry["structures"] == ["liver"]
        assert entry["body_part"] == "chest"

    r = client.get(
        "/api/series", params={"q": "anatomical_structures:liver AND Modality:CT"}
    )
    assert r.json()["total"] == 2
    doc = client.get(f"/api/series/{uids[0]}").json()
    assert doc["anatomical_structures"] == ["liver"]
    assert doc["body_part"] == "chest"


def test_static_ui_mount(populated, tmp_path):
    engine, _, _ = populated
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<html><body>curator</body></html>")
    client = TestClient(create_app(engine, ui_dir=ui), raise_server_exceptions=False)
    r = client.get("/")
    assert r.status_code == 200
    assert "curator" in r.text
    # API routes still win over the static mount
    assert client.get("/api/series", params={"q": ""}).status_code == 200
