"""Command line behavior: exit codes, stream separation, output formats."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from dicomcurator.cli import main
from dicomcurator.curation_service import CuratorConfig, CurationEngine
from dicomcurator.dicom_core import serialize
from corpus import ct_instance


@pytest.fixture
def workspace(tmp_path):
    src = tmp_path / "incoming"
    src.mkdir()
    for i in (1, 2):
        obj = ct_instance("1.2.10", f"1.2.10.{i}", i)
        (src / f"a{i}.dcm").write_bytes(serialize(obj))
    obj = ct_instance("1.2.20", "1.2.20.1", 1, kernel="B70f")
    (src / "b1.dcm").write_bytes(serialize(obj))
    return tmp_path / "data", src


def _invoke(data_dir, *args):
    runner = CliRunner()
    return runner.invoke(main, ["--data-dir", str(data_dir), *args])


def test_ingest_then_search(workspace):
    data, src = workspace
    r = _invoke(data, "ingest", str(src))
    assert r.exit_code == 0, r.output
    assert "2 series" in r.output

    r = _invoke(data, "search", "Modality:CT")
    assert r.exit_code == 0
    assert "1.2.10" in r.output and "1.2.20" in r.output
    assert "uid" in r.output and "Modality" in r.output  # header row


def test_ingest_json_report(workspace):
    data, src = workspace
    r = _invoke(data, "ingest", str(src), "--json")
    report = json.loads(r.output)
    assert report["instances"] == 3
    assert report["indexed_series"] == 2


def test_ingest_missing_path_is_operational_error(workspace):
    data, _ = workspace
    r = _invoke(data, "ingest", str(data / "missing"))
    assert r.exit_code == 1
    assert "error:" in r.stderr


def test_search_ndjson(workspace):
    data, src = workspace
    _invoke(data, "ingest", str(src))
    r = _invoke(data, "search", "Modality:CT", "--json")
    assert r.exit_code == 0
    hits = [json.loads(line) for line in r.stdout.strip().splitlines()]
    assert len(hits) == 2
    assert all(h["modality"] == "CT" for h in hits)


def test_search_custom_columns_and_limit(workspace):
    data, src = workspace
    _invoke(data, "ingest", str(src))
    r = _invoke(data, "search", "", "--cols", "uid,ConvolutionKernel")
    assert r.exit_code == 0
    assert "B70f" in r.output
    r = _invoke(data, "search", "", "--json", "--limit", "1")
    assert len(r.stdout.strip().splitlines()) == 1


def test_query_syntax_error_is_usage_error(workspace):
    data, src = workspace
    _invoke(data, "ingest", str(src))
    r = _invoke(data, "search", "(a OR")
    assert r.exit_code == 2
    assert "position 5" in r.stderr
    assert "query grammar" in r.stderr
    assert r.stdout == ""


def test_aggregate_table_and_csv(workspace):
    data, src = workspace
    _invoke(data, "ingest", str(src))
    r = _invoke(data, "aggregate", "", "--fields", "ConvolutionKernel")
    assert r.exit_code == 0
    assert "B30f" in r.output and "B70f" in r.output

    r = _invoke(data, "aggregate", "", "--fields", "ConvolutionKernel", "--csv")
    assert r.exit_code == 0
    engine = CurationEngine(
        CuratorConfig(data_dir=data, archive_dir=data / "archive")
    )
    try:
        expected = engine.aggregate_csv("", "ConvolutionKernel")
    finally:
        engine.close()
    assert r.stdout_bytes == expected


def test_aggregate_csv_needs_single_field(workspace):
    data, src = workspace
    _invoke(data, "ingest", str(src))
    r = _invoke(data, "aggregate", "", "--fields", "Modality,PatientID", "--csv")
    assert r.exit_code == 2
    r = _invoke(data, "aggregate", "", "--fields", "")
    assert r.exit_code == 2


def test_thumbs_writes_cache_files(workspace):
    data, src = workspace
    _invoke(data, "ingest", str(src))
    r = _invoke(data, "thumbs", "Modality:CT")
    assert r.exit_code == 0, r.output
    paths = [Path(p) for p in r.stdout.strip().splitlines()]
    assert len(paths) == 2
    assert all(p.is_file() and p.suffix == ".png" for p in paths)


def test_fsck_clean(workspace):
    data, src = workspace
    _invoke(data, "ingest", str(src))
    r = _invoke(data, "fsck")
    assert r.exit_code == 0
    assert "clean" in r.output
    r = _invoke(data, "fsck", "--json")
    report = json.loads(r.output)
    assert report["dangling_memberships"] == []
    assert report["archive_orphans"] == []


def test_unknown_command_is_usage_error(workspace):
    data, _ = workspace
    r = _invoke(data, "definitely-not-a-command")
    assert r.exit_code == 2


def test_annotate_with_mock_manifest(workspace, mock_annotator_dir, tmp_path):
    data, src = workspace
    config_file = tmp_path / "curator.toml"
    config_file.write_text(
        "\n".join(
            [
                "[curator]",
                f'data_dir = "{data}"',
                f'archive_dir = "{data / "archive"}"',
                f'annotator_dir = "{mock_annotator_dir}"',
            ]
        )
    )
    runner = CliRunner()
    base = ["--config", str(config_file)]
    r = runner.invoke(main, base + ["ingest", str(src)])
    assert r.exit_code == 0, r.output

    r = runner.invoke(main, base + ["annotate", "mockseg", "Modality:CT"])
    assert r.exit_code == 0, r.output + r.stderr
    lines = r.stdout.strip().splitlines()
    assert len(lines) == 2
    assert all(line.endswith(": liver") for line in lines)

    r = runner.invoke(main, base + ["search", "anatomical_structures:liver"])
    assert "1.2.10" in r.output and "1.2.20" in r.output

    r = runner.invoke(main, base + ["annotate", "ghost", "Modality:CT"])
    assert r.exit_code == 1
    assert "ghost" in r.stderr
