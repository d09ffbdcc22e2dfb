"""HTTP surface. Each endpoint delegates to one engine method and
serializes its result; error translation is the only logic here.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..annotator import (
    AnnotatorFailed,
    InvalidManifest,
    ProtocolViolation,
    Timeout,
    UnreferencedSegmentation,
)
from ..dataset_store import (
    DuplicateName,
    InvalidName,
    InvalidTag,
    OverlappingAddRemove,
    UnknownDataset,
)
from ..metadata_index import ParseError
from ..metadata_index.errors import FieldNotInDistribution, UnknownSeries
from .engine import (
    CurationEngine,
    SeriesNotFound,
    SliceNotFound,
    UnknownAnnotator,
    UnknownJob,
)
from .errors import ApiError, PathNotFound


def to_api_error(exc: Exception) -> ApiError:
    if isinstance(exc, ApiError):
        return exc
    if isinstance(exc, ParseError):
        return ApiError("parse_error", str(exc), {
            "position": exc.position,
            "expected": sorted(exc.expected),
        })
    if isinstance(exc, (SeriesNotFound, UnknownSeries)):
        return ApiError("unknown_series", str(exc))
    if isinstance(exc, (UnknownDataset,)):
        return ApiError("unknown_dataset", str(exc))
    if isinstance(exc, UnknownAnnotator):
        return ApiError("unknown_annotator", str(exc))
    if isinstance(exc, UnknownJob):
        return ApiError("unknown_job", str(exc))
    if isinstance(exc, (FieldNotInDistribution,)):
        return ApiError("unknown_field", str(exc))
    if isinstance(exc, SliceNotFound):
        return ApiError("frame_out_of_range", str(exc))
    if isinstance(exc, DuplicateName):
        return ApiError("duplicate_name", str(exc))
    if isinstance(exc, InvalidName):
        return ApiError("invalid_name", str(exc))
    if isinstance(exc, InvalidTag):
        return ApiError("invalid_tag", str(exc))
    if isinstance(exc, OverlappingAddRemove):
        return ApiError("overlapping_add_remove", str(exc))
    if isinstance(exc, PathNotFound):
        return ApiError("path_not_found", str(exc))
    if isinstance(exc, Timeout):
        return ApiError("annotator_timeout", str(exc))
    if isinstance(exc, (AnnotatorFailed,)):
        return ApiError("annotator_failed", str(exc))
    if isinstance(exc, (ProtocolViolation, InvalidManifest,
                        UnreferencedSegmentation)):
        return ApiError("protocol_violation", str(exc))
    if isinstance(exc, (ValueError, TypeError, KeyError)):
        return ApiError("invalid_request", str(exc))
    return ApiError("internal_error", str(exc) or exc.__class__.__name__)


def create_app(engine: CurationEngine, ui_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="dicomcurator", docs_url=None, redoc_url=None)
    app.state.engine = engine

    @app.exception_handler(Exception)
    async def handle_any(request: Request, exc: Exception):
        error = to_api_error(exc)
        return JSONResponse(status_code=error.status, content=error.body())

    def fail(exc: Exception):
        error = to_api_error(exc)
        return JSONResponse(status_code=error.status, content=error.body())

    @app.post("/api/ingest")
    async def ingest(body: dict):
        try:
            path = body.get("path")
            if not isinstance(path, str) or not path:
                raise ApiError("invalid_request", "body must carry a 'path' string")
            recursive = bool(body.get("recursive", True))
            return engine.ingest_directory(path, recursive=recursive).to_json()
        except Exception as exc:
            return fail(exc)

    @app.get("/api/series")
    async def series(q: str = "", from_: int = 0, size: int = 10,
                     sort: Optional[str] = None, request: Request = None):
        try:
            params = request.query_params if request is not None else {}
            if "from" in params:
                from_ = int(params["from"])
            return engine.search_json(q, from_=from_, size=size, sort=sort)
        except Exception as exc:
            return fail(exc)

    @app.get("/api/series/{uid}")
    async def series_detail(uid: str):
        try:
            return engine.document_json(uid)
        except Exception as exc:
            return fail(exc)

    @app.get("/api/series/{uid}/thumbnail.png")
    async def thumbnail(uid: str, edge: Optional[int] = None):
        try:
            png = engine.thumbnail_png(uid, edge=edge)
            return Response(content=png, media_type="image/png")
        except Exception as exc:
            return fail(exc)

    @app.get("/api/series/{uid}/slices/{position}.png")
    async def slice_image(uid: str, position: int):
        try:
            png = engine.slice_png(uid, position)
            return Response(content=png, media_type="image/png")
        except Exception as exc:
            return fail(exc)

    @app.get("/api/aggregate")
    async def aggregate(q: str = "", fields: str = ""):
        try:
            names = [f.strip() for f in fields.split(",") if f.strip()]
            if not names:
                raise ApiError("invalid_request",
                               "fields must be a non-empty csv list")
            return engine.aggregate_json(q, names)
        except Exception as exc:
            return fail(exc)

    @app.get("/api/aggregate.csv")
    async def aggregate_csv(q: str = "", field: str = ""):
        try:
            if not field:
                raise ApiError("invalid_request", "field is required")
            data = engine.aggregate_csv(q, field)
            return Response(content=data, media_type="text/csv")
        except Exception as exc:
            return fail(exc)

    @app.get("/api/autocomplete")
    async def autocomplete(field: str = "", prefix: str = "", limit: int = 10):
        try:
            if not field:
                raise ApiError("invalid_request", "field is required")
            return engine.autocomplete_json(field, prefix, limit)
        except Exception as exc:
            return fail(exc)

    @app.post("/api/datasets")
    async def create_dataset(body: dict):
        try:
            name = body.get("name")
            if not isinstance(name, str):
                raise ApiError("invalid_request", "body must carry a 'name' string")
            return engine.create_dataset_json(name)
        except Exception as exc:
            return fail(exc)

    @app.get("/api/datasets")
    async def list_datasets():
        try:
            return engine.list_datasets_json()
        except Exception as exc:
            return fail(exc)

    @app.get("/api/datasets/{dataset_id}")
    async def get_dataset(dataset_id: str):
        try:
            return engine.get_dataset_json(dataset_id)
        except Exception as exc:
            return fail(exc)

    @app.patch("/api/datasets/{dataset_id}/series")
    async def patch_membership(dataset_id: str, body: dict):
        try:
            add = body.get("add", [])
            remove = body.get("remove", [])
            if not isinstance(add, list) or not isinstance(remove, list):
                raise ApiError("invalid_request", "add/remove must be lists")
            return engine.modify_membership_json(dataset_id, add, remove)
        except Exception as exc:
            return fail(exc)

    @app.post("/api/tags/bulk")
    async def bulk_tag(body: dict):
        try:
            uids = body.get("uids", [])
            add = body.get("add", [])
            remove = body.get("remove", [])
            if not isinstance(uids, list) or not uids:
                raise ApiError("invalid_request", "uids must be a non-empty list")
            if not isinstance(add, list) or not isinstance(remove, list):
                raise ApiError("invalid_request", "add/remove must be lists")
            return engine.bulk_tag_json(uids, add, remove)
        except Exception as exc:
            return fail(exc)

    @app.get("/api/annotators")
    async def annotators():
        try:
            return engine.list_annotators_json()
        except Exception as exc:
            return fail(exc)

    @app.post("/api/annotators/{name}/run")
    async def run_annotator(name: str, body: dict):
        try:
            uids = body.get("series_uids", [])
            if not isinstance(uids, list) or not uids:
                raise ApiError("invalid_request",
                               "series_uids must be a non-empty list")
            job_id = engine.run_annotator(name, uids)
            return {"job_id": job_id}
        except Exception as exc:
            return fail(exc)

    @app.get("/api/jobs/{job_id}")
    async def job(job_id: str):
        try:
            return engine.job_json(job_id)
        except Exception as exc:
            return fail(exc)

    @app.get("/api/fsck")
    async def fsck():
        try:
            return engine.fsck_json()
        except Exception as exc:
            return fail(exc)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True),
                  name="ui")

    return app
