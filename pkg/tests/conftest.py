import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dicomcurator.curation_service import CuratorConfig, CurationEngine


@pytest.fixture
def engine(tmp_path):
    eng = CurationEngine(
        CuratorConfig(data_dir=tmp_path / "data", archive_dir=tmp_path / "archive")
    )
    yield eng
    eng.close()


@pytest.fixture
def mock_annotator_dir(tmp_path):
    """Manifest directory with a subprocess annotator that reports liver/chest."""
    adir = tmp_path / "annotators"
    adir.mkdir()
    script = adir / "mock_annotator.py"
    script.write_text(
        "import json, os\n"
        "out = os.environ['CURATOR_OUTPUT_DIR']\n"
        "result = {'series_uid': os.environ['CURATOR_SERIES_UID'],"
        " 'structures': ['liver'], 'body_part': 'chest'}\n"
        "json.dump(result, open(os.path.join(out, 'result.json'), 'w'))\n"
    )
    manifest = {
        "name": "mockseg",
        "version": "1",
        "kind": "segmentation",
        "labels": ["liver", "spleen", "chest"],
        "invocation": f"{sys.executable} {script} {{input_dir}} {{output_dir}}",
    }
    (adir / "mockseg.manifest.json").write_text(json.dumps(manifest))
    return adir


@pytest.fixture
def annotated_engine(tmp_path, mock_annotator_dir):
    eng = CurationEngine(
        CuratorConfig(
            data_dir=tmp_path / "data",
            archive_dir=tmp_path / "archive",
            annotator_dir=mock_annotator_dir,
        )
    )
    yield eng
    eng.close()
