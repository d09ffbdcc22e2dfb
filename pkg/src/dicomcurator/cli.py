"""Operator command line: ingest, serve, search, aggregate, thumbs, fsck,
annotate.

Exit codes: 0 success, 1 operational error, 2 usage error (including
query syntax errors). Data goes to stdout, diagnostics to stderr;
--json switches list output to NDJSON.
"""

from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional

import click

from .curation_service import (
    CuratorConfig,
    CurationEngine,
    create_app,
    load_config,
    to_api_error,
)
from .metadata_index import MAX_PAGE_SIZE, ParseError
from .thumbnail_engine import ThumbnailConfig, cache_path

DEFAULT_COLS = ("uid", "Modality", "PatientID", "instance_count", "tags")

_GRAMMAR_HINT = (
    "query grammar: clauses of field:value, field:[lo TO hi], quoted "
    "phrases, AND/OR/NOT; bare * matches everything")


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="TOML config file.")
@click.option("--data-dir", default=None, help="Override the data directory.")
@click.option("--archive-dir", default=None, help="Override the archive directory.")
@click.pass_context
def main(ctx, config_path, data_dir, archive_dir):
    """Desk-scale DICOM curation: local archive, search index, thumbnails."""
    ctx.ensure_object(dict)
    env = dict(os.environ)
    if data_dir:
        env["CURATOR_DATA_DIR"] = data_dir
    if archive_dir:
        env["CURATOR_ARCHIVE_DIR"] = archive_dir
    ctx.obj["config"] = load_config(config_path, env=env)


def _engine(ctx) -> CurationEngine:
    engine = ctx.obj.get("engine")
    if engine is None:
        engine = CurationEngine(ctx.obj["config"])
        ctx.obj["engine"] = engine
    return engine


def _operational(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _parse_or_usage(run):
    try:
        return run()
    except ParseError as exc:
        raise click.UsageError(f"{exc}\n{_GRAMMAR_HINT}")


def _all_hits(engine: CurationEngine, query: str, sort: Optional[str] = None):
    offset = 0
    while True:
        page = engine.search_json(query, from_=offset, size=MAX_PAGE_SIZE,
                                  sort=sort)
        for hit in page["hits"]:
            yield hit
        offset += len(page["hits"])
        if offset >= page["total"] or not page["hits"]:
            break


def _column_value(hit: dict, column: str) -> str:
    if column == "uid":
        return hit["series_uid"]
    direct = {
        "instance_count": lambda: str(hit["instance_count"]),
        "tags": lambda: ",".join(hit["tags"]),
        "anatomical_structures": lambda: ",".join(hit["anatomical_structures"]),
        "body_part": lambda: hit["body_part"] or "",
        "ingest_time": lambda: str(hit["ingest_time"]),
        "has_pixel_data": lambda: str(hit["has_pixel_data"]).lower(),
    }
    if column in direct:
        return direct[column]()
    fields = hit["fields"]
    if column in fields:
        return ",".join(str(v) for v in fields[column]["values"])
    lowered = column.casefold()
    for name, field in fields.items():
        if name.casefold() == lowered:
            return ",".join(str(v) for v in field["values"])
    return ""


@main.command()
@click.argument("path", type=click.Path())
@click.option("--no-recursive", is_flag=True, help="Do not descend into subdirectories.")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
@click.pass_context
def ingest(ctx, path, no_recursive, as_json):
    """Parse and index every DICOM or NIfTI file under PATH."""
    engine = _engine(ctx)
    try:
        report = engine.ingest_directory(path, recursive=not no_recursive)
    except Exception as exc:
        _operational(to_api_error(exc).message)
        return
    if as_json:
        click.echo(json.dumps(report.to_json()))
        return
    click.echo(
        f"scanned {report.scanned} files: {report.instances} instances in "
        f"{report.indexed_series} series, {len(report.skipped)} skipped "
        f"({report.duration_ms:.0f} ms)")
    for file_path, code in report.skipped:
        click.echo(f"  skipped {file_path}: {code}", err=True)


@main.command()
@click.option("--ui-dir", type=click.Path(), default=None,
              help="Directory with the built web UI (served under /).")
@click.pass_context
def serve(ctx, ui_dir):
    """Run the HTTP API (and web UI when available)."""
    import uvicorn

    config: CuratorConfig = ctx.obj["config"]
    engine = _engine(ctx)
    ui_path = Path(ui_dir) if ui_dir else Path("frontend") / "dist"
    app = create_app(engine, ui_dir=ui_path if ui_path.is_dir() else None)
    uvicorn.run(app, host=config.bind_host, port=config.bind_port,
                log_level="warning")


@main.command()
@click.argument("query", default="")
@click.option("--json", "as_json", is_flag=True, help="NDJSON, one hit per line.")
@click.option("--cols", default=",".join(DEFAULT_COLS),
              help="Comma-separated output columns.")
@click.option("--sort", default=None, help="Sort field; prefix - for descending.")
@click.option("--limit", default=0, type=int,
              help="Stop after this many hits (0 = all).")
@click.pass_context
def search(ctx, query, as_json, cols, sort, limit):
    """Print series matching QUERY."""
    engine = _engine(ctx)
    hits = _parse_or_usage(
        lambda: list(_all_hits(engine, query, sort=sort)))
    if limit > 0:
        hits = hits[:limit]
    if as_json:
        for hit in hits:
            click.echo(json.dumps(hit, sort_keys=True))
        return
    columns = [c.strip() for c in cols.split(",") if c.strip()]
    rows = [[_column_value(hit, c) for c in columns] for hit in hits]
    widths = [
        max(len(col), *(len(r[i]) for r in rows)) if rows else len(col)
        for i, col in enumerate(columns)
    ]
    click.echo("  ".join(c.ljust(widths[i]) for i, c in enumerate(columns)))
    for row in rows:
        click.echo("  ".join(v.ljust(widths[i]) for i, v in enumerate(row)))


@main.command()
@click.argument("query", default="")
@click.option("--fields", required=True,
              help="Comma-separated facet fields.")
@click.option("--csv", "as_csv", is_flag=True,
              help="CSV export (single field only).")
@click.option("--json", "as_json", is_flag=True, help="NDJSON, one field per line.")
@click.pass_context
def aggregate(ctx, query, fields, as_csv, as_json):
    """Facet counts over series matching QUERY."""
    engine = _engine(ctx)
    names = [f.strip() for f in fields.split(",") if f.strip()]
    if not names:
        raise click.UsageError("--fields must name at least one field")
    if as_csv:
        if len(names) != 1:
            raise click.UsageError("--csv exports exactly one field")
        data = _parse_or_usage(lambda: engine.aggregate_csv(query, names[0]))
        sys.stdout.buffer.write(data)
        return
    result = _parse_or_usage(lambda: engine.aggregate_json(query, names))
    if as_json:
        for name in names:
            click.echo(json.dumps({name: result["fields"][name]}, sort_keys=True))
        return
    for name in names:
        facet = result["fields"][name]
        click.echo(name)
        for bucket in facet["buckets"]:
            click.echo(f"  {bucket['value']}\t{bucket['count']}")
        if facet["missing_count"]:
            click.echo(f"  (missing)\t{facet['missing_count']}")
    for warning in result["warnings"]:
        click.echo(f"warning: {warning}", err=True)


@main.command()
@click.argument("query", default="")
@click.option("--edge", default=None, type=int, help="Thumbnail edge in pixels.")
@click.pass_context
def thumbs(ctx, query, edge):
    """Generate (and cache) thumbnails for every series matching QUERY."""
    engine = _engine(ctx)
    uids = [hit["series_uid"]
            for hit in _parse_or_usage(lambda: list(_all_hits(engine, query)))]
    cfg = ThumbnailConfig(edge=edge or engine.config.thumb_edge)

    def build(uid: str) -> str:
        engine.thumbnail_png(uid, edge=cfg.edge)
        return str(cache_path(engine.cache_dir, uid, cfg))

    workers = max(1, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for path in pool.map(build, uids):
            click.echo(path)


@main.command()
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
@click.pass_context
def fsck(ctx, as_json):
    """Report dataset members and tags pointing at missing series."""
    engine = _engine(ctx)
    report = engine.fsck_json()
    if as_json:
        click.echo(json.dumps(report, sort_keys=True))
        return
    clean = not any(report.values())
    if clean:
        click.echo("clean: no dangling references")
        return
    for dataset_id, uid in report["dangling_memberships"]:
        click.echo(f"dangling membership: dataset {dataset_id} -> {uid}")
    for uid in report["dangling_tags"]:
        click.echo(f"dangling tags: {uid}")
    for name in report["archive_orphans"]:
        click.echo(f"archive dir without index entry: {name}")


@main.command()
@click.argument("name")
@click.argument("query", default="")
@click.option("--timeout", default=None, type=float,
              help="Per-series timeout in seconds.")
@click.pass_context
def annotate(ctx, name, query, timeout):
    """Run annotator NAME over every series matching QUERY."""
    engine = _engine(ctx)
    uids = [hit["series_uid"]
            for hit in _parse_or_usage(lambda: list(_all_hits(engine, query)))]
    if not uids:
        click.echo("no matching series", err=True)
        return
    try:
        job_id = engine.run_annotator(name, uids, timeout=timeout)
    except Exception as exc:
        _operational(to_api_error(exc).message)
        return
    while True:
        job = engine.job_json(job_id)
        if job["status"] in ("done", "failed"):
            break
        time.sleep(0.05)
    if job["status"] == "failed":
        _operational(job["error"] or "annotator job failed")
        return
    failures = 0
    for entry in job["result"]["entries"]:
        if entry.get("error"):
            failures += 1
            click.echo(f"{entry['series_uid']}: {entry['error']}", err=True)
        else:
            structures = ",".join(entry.get("structures", ()))
            click.echo(f"{entry['series_uid']}: {structures or '(none)'}")
    if failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
