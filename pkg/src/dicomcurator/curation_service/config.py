"""Service configuration: TOML file with environment overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ImportError:  # < 3.11
    import tomli as tomllib

DEFAULT_PORT = 8765


@dataclass(frozen=True)
class CuratorConfig:
    data_dir: Path
    archive_dir: Path
    bind_host: str = "127.0.0.1"
    bind_port: int = DEFAULT_PORT
    annotator_dir: Optional[Path] = None
    thumb_edge: int = 128


def _parse_bind(value: str):
    host, sep, port = value.rpartition(":")
    if not sep:
        return value, DEFAULT_PORT
    return host or "127.0.0.1", int(port)


def load_config(path=None, env=None) -> CuratorConfig:
    """Defaults <- TOML [curator] table <- CURATOR_* environment variables."""
    env = os.environ if env is None else env
    table = {}
    if path is not None:
        with open(path, "rb") as fh:
            table = tomllib.load(fh).get("curator", {})

    data_dir = env.get("CURATOR_DATA_DIR") or table.get("data_dir") or "curator-data"
    archive_dir = (env.get("CURATOR_ARCHIVE_DIR") or table.get("archive_dir")
                   or str(Path(data_dir) / "archive"))
    bind = env.get("CURATOR_BIND") or table.get("bind") or f"127.0.0.1:{DEFAULT_PORT}"
    annotator_dir = env.get("CURATOR_ANNOTATOR_DIR") or table.get("annotator_dir")
    edge = env.get("CURATOR_THUMB_EDGE") or table.get("thumb_edge") or 128

    host, port = _parse_bind(str(bind))
    return CuratorConfig(
        data_dir=Path(data_dir),
        archive_dir=Path(archive_dir),
        bind_host=host,
        bind_port=port,
        annotator_dir=Path(annotator_dir) if annotator_dir else None,
        thumb_edge=int(edge),
    )
