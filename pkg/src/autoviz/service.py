"""HTTP facade: upload-and-analyze, health, and job polling.

Small uploads (<= the sync cutoff) run the pipeline synchronously and
return the full report; larger files are enqueued on a bounded worker pool
and polled via /api/jobs/{id}.  Every non-2xx response body is a single
structured error object; stack traces stay in the server log.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

import autoviz
from autoviz import errors
from autoviz.config import ServiceConfig
from autoviz.pipeline import PipelineOptions, run_pipeline
from autoviz.store import JobStore, is_valid_job_id

log = logging.getLogger("autoviz.service")

ALLOWED_EXTENSIONS = {".csv", ".tsv", ".tab", ".txt"}
ALLOWED_CONTENT_TYPES = {"text/csv", "text/tab-separated-values",
                         "text/plain", "application/csv",
                         "application/octet-stream"}


def _api_error(status: int, code: str, message: str) -> errors.AutovizError:
    exc = errors.AutovizError(message)
    exc.http_status = status
    exc.code = code
    return exc


def _error_response(status: int, code: str, message: str,
                    detail: Optional[str] = None) -> JSONResponse:
    return JSONResponse(status_code=status, content={
        "http_status": status, "code": code,
        "message": message, "detail": detail})


def _acceptable_upload(upload: UploadFile) -> bool:
    name = (upload.filename or "").lower()
    if any(name.endswith(ext) for ext in ALLOWED_EXTENSIONS):
        return True
    ctype = (upload.content_type or "").split(";")[0].strip()
    return ctype in ALLOWED_CONTENT_TYPES


def _run_job(store: JobStore, job_id: str) -> None:
    try:
        record = store.transition(job_id, "running")
    except (KeyError, ValueError):
        return
    try:
        raw = store.input_bytes(job_id)
        options = PipelineOptions.from_dict(record.options)
        result = run_pipeline(raw, options)
        store.save_report(job_id, result.report_json())
        store.transition(job_id, "done")
    except errors.AutovizError as exc:
        store.transition(job_id, "failed", error={
            "code": exc.code, "message": exc.message})
    except Exception:
        log.exception("job %s failed", job_id)
        store.transition(job_id, "failed", error={
            "code": "internal_error", "message": "pipeline failed"})


def create_app(config: ServiceConfig = ServiceConfig()) -> FastAPI:
    app = FastAPI(title="autoviz", version=autoviz.__version__)
    store = JobStore(config.store_dir)
    store.recover()
    pool = ThreadPoolExecutor(max_workers=config.workers)
    started = time.monotonic()

    app.state.config = config
    app.state.store = store
    app.state.pool = pool

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware, allow_origins=list(config.cors_origins),
            allow_methods=["*"], allow_headers=["*"])

    @app.middleware("http")
    async def enforce_size_cap(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None:
            try:
                if int(length) > config.size_cap + 16384:
                    # slack covers multipart framing around the file part
                    return _error_response(
                        413, "size_limit_exceeded",
                        f"request exceeds size cap of {config.size_cap} "
                        "bytes")
            except ValueError:
                pass
        return await call_next(request)

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request,
                                       exc: RequestValidationError):
        return _error_response(400, "bad_request",
                               "malformed request", detail=str(exc.errors()))

    @app.exception_handler(errors.AutovizError)
    async def autoviz_error_handler(request: Request,
                                    exc: errors.AutovizError):
        return _error_response(exc.http_status, exc.code, exc.message,
                               exc.detail)

    @app.exception_handler(Exception)
    async def unhandled_error_handler(request: Request, exc: Exception):
        log.exception("unhandled error on %s", request.url.path)
        return _error_response(500, "internal_error",
                               "internal server error")

    @app.get("/api/health")
    async def health():
        return {"status": "ok",
                "uptime_seconds": time.monotonic() - started,
                "version": autoviz.__version__}

    @app.post("/api/upload")
    def upload(file: Optional[UploadFile] = File(None),
               options: Optional[str] = Form(None)):
        if file is None:
            raise _api_error(400, "missing_file",
                             "upload requires a 'file' part")
        if not _acceptable_upload(file):
            raise _api_error(415, "unsupported_media_type",
                             "only CSV/TSV uploads are supported")
        opts_dict: dict = {}
        if options:
            try:
                opts_dict = json.loads(options)
                if not isinstance(opts_dict, dict):
                    raise ValueError("options must be an object")
                PipelineOptions.from_dict(opts_dict)
            except (ValueError, TypeError, KeyError) as exc:
                raise _api_error(400, "bad_options",
                                 f"malformed options: {exc}") from exc

        raw = file.file.read()
        if len(raw) > config.size_cap:
            raise errors.SizeLimitExceeded(
                f"file exceeds size cap of {config.size_cap} bytes")
        if len(raw) <= config.sync_cutoff:
            result = run_pipeline(raw, PipelineOptions.from_dict(opts_dict))
            return JSONResponse(json.loads(result.report_json()))
        record = store.create(raw, opts_dict)
        pool.submit(_run_job, store, record.id)
        return JSONResponse(status_code=202, content={"job_id": record.id})

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str):
        if not is_valid_job_id(job_id):
            raise _api_error(400, "malformed_job_id", "malformed job id")
        record = store.get(job_id)
        if record is None:
            raise _api_error(404, "unknown_job", "unknown job id")
        body = {
            "id": record.id, "state": record.state,
            "created_at": record.created_at,
            "finished_at": record.finished_at,
            "input_digest": record.input_digest,
            "result_location": record.result_location,
            "error": record.error,
        }
        if record.state == "done":
            report_json = store.report_json(job_id)
            if report_json is not None:
                body["report"] = json.loads(report_json)
        return body

    return app
