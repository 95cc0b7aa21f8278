"""HTTP API over the analysis pipeline.

Uploads create in-memory sessions (immutable after load, expired after a
configurable idle time); every analysis endpoint is a pure GET over the
session's collection and echoes the resolved inputs so clients can display
them. Infinities are serialized as the string "Inf", undefined values as
null.
"""

from __future__ import annotations

import tempfile
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import analysis
from .align import Perspective, Scale
from .datasets import DataSetCollection, load_experiment
from .errors import InvalidRange, IohaError, NoMatchingData, UnknownParameter
from .tables import export_table

DEFAULT_MAX_UPLOAD_MB = 64
DEFAULT_SESSION_TTL_MIN = 60


@dataclass
class Session:
    id: str
    collection: DataSetCollection
    created_at: float
    last_used: float


@dataclass
class SessionRegistry:
    ttl_seconds: float
    sessions: dict[str, Session] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def create(self, collection: DataSetCollection) -> str:
        session_id = uuid.uuid4().hex
        now = time.monotonic()
        with self._lock:
            self._expire(now)
            self.sessions[session_id] = Session(session_id, collection, now, now)
        return session_id

    def get(self, session_id: str) -> Session:
        now = time.monotonic()
        with self._lock:
            self._expire(now)
            session = self.sessions.get(session_id)
            if session is None:
                raise KeyError(session_id)
            session.last_used = now
            return session

    def _expire(self, now: float) -> None:
        dead = [sid for sid, s in self.sessions.items() if now - s.last_used > self.ttl_seconds]
        for sid in dead:
            del self.sessions[sid]


def _summary(collection: DataSetCollection) -> dict:
    table = analysis.summary_table(collection)
    datasets = [dict(zip(table.header, row)) for row in table.rows]
    params = sorted({name for ds in collection for name in ds.param_names})
    return {
        "datasets": datasets,
        "algorithms": collection.algorithms,
        "functions": collection.functions,
        "dimensions": collection.dimensions,
        "parameters": params,
        "direction": collection.datasets[0].direction.value if len(collection) else None,
    }


def _json(payload) -> JSONResponse:
    return JSONResponse(analysis.jsonable(payload))


def _csv_list(raw: str | None) -> list[str] | None:
    if raw is None or raw == "":
        return None
    return [item for item in raw.split(",") if item]


def _parse_target_map_json(raw: str) -> dict[str, list[float]]:
    import json as json_mod

    try:
        parsed = json_mod.loads(raw)
        return {str(k): [float(x) for x in v] for k, v in parsed.items()}
    except (ValueError, TypeError, AttributeError):
        raise HTTPException(
            422, "target_map must be a JSON object {funcId: [targets]}"
        ) from None


def _table_response(table, fmt: str):
    if fmt == "json":
        return _json({"header": table.header, "rows": table.rows, "caption": table.caption})
    media = "text/csv" if fmt == "csv" else "application/x-latex"
    from fastapi import Response

    return Response(content=export_table(table, fmt), media_type=media)


def create_app(
    max_upload_mb: int = DEFAULT_MAX_UPLOAD_MB,
    session_ttl_min: int = DEFAULT_SESSION_TTL_MIN,
    allow_origin: str = "*",
    ui_dir: Path | None = None,
) -> FastAPI:
    app = FastAPI(title="ioha service", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[allow_origin] if allow_origin != "*" else ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = SessionRegistry(ttl_seconds=session_ttl_min * 60.0)
    app.state.registry = registry
    max_upload_bytes = max_upload_mb * 1024 * 1024

    @app.exception_handler(IohaError)
    async def _ioha_error(request: Request, exc: IohaError):
        status = 422 if isinstance(exc, (InvalidRange, NoMatchingData, UnknownParameter)) else 400
        return JSONResponse({"detail": f"{type(exc).__name__}: {exc}"}, status_code=status)

    def get_session(session_id: str) -> Session:
        try:
            return registry.get(session_id)
        except KeyError:
            raise HTTPException(404, f"unknown session {session_id!r}") from None

    @app.post("/api/sessions", status_code=200)
    async def create_session(archive: UploadFile):
        data = await archive.read()
        if len(data) > max_upload_bytes:
            raise HTTPException(413, f"upload exceeds {max_upload_mb} MiB")
        suffix = Path(archive.filename or "upload.zip").suffix or ".zip"
        with tempfile.NamedTemporaryFile(suffix=suffix, delete=True) as tmp:
            tmp.write(data)
            tmp.flush()
            collection = load_experiment(tmp.name)
        session_id = registry.create(collection)
        return _json({"sessionId": session_id, "summary": _summary(collection)})

    @app.get("/api/sessions/{session_id}")
    def session_summary(session_id: str):
        session = get_session(session_id)
        return _json({"sessionId": session_id, "summary": _summary(session.collection)})

    def resolve(session, func, dim, algs, perspective, lo, hi, step, count, scale):
        datasets = analysis.select_datasets(
            session.collection, func_id=func, dimension=dim, alg_ids=_csv_list(algs)
        )
        anchors = analysis.resolve_anchors(
            datasets,
            Perspective(perspective),
            lo=lo,
            hi=hi,
            step=step,
            count=count,
            scale=Scale(scale),
        )
        return datasets, anchors

    @app.get("/api/sessions/{session_id}/stats")
    def stats_endpoint(
        session_id: str,
        func_id: str = Query(alias="func"),
        dim: int = Query(),
        algs: str | None = None,
        perspective: str = "target",
        lo: float | None = Query(default=None, alias="min"),
        hi: float | None = Query(default=None, alias="max"),
        step: float | None = None,
        count: int | None = None,
        scale: str = "auto",
        target: float | None = None,
        fmt: str = Query(default="json", alias="format"),
        layout: str | None = None,
    ):
        session = get_session(session_id)
        datasets, anchors = resolve(
            session, func_id, dim, algs, perspective, lo, hi, step, count, scale
        )
        if layout is not None:
            return _table_response(analysis.samples_table(datasets, anchors, layout), fmt)
        if fmt != "json":
            return _table_response(analysis.stats_table(datasets, anchors, target), fmt)
        payload = analysis.stats_payload(datasets, anchors, target)
        payload.update({"func": func_id, "dim": dim, "algs": [ds.alg_id for ds in datasets]})
        return _json(payload)

    @app.get("/api/sessions/{session_id}/overview")
    def overview_endpoint(
        session_id: str,
        func_id: str = Query(alias="func"),
        dim: int = Query(),
        fmt: str = Query(default="json", alias="format"),
    ):
        session = get_session(session_id)
        table = analysis.overview_table(session.collection, func_id, dim)
        return _table_response(table, fmt)

    @app.get("/api/sessions/{session_id}/ecdf")
    def ecdf_endpoint(
        session_id: str,
        dim: int = Query(),
        func_id: str | None = Query(default=None, alias="func"),
        algs: str | None = None,
        perspective: str = "target",
        targets: str | None = None,
        target_map: str | None = None,
        lo: float | None = Query(default=None, alias="min"),
        hi: float | None = Query(default=None, alias="max"),
        step: float | None = None,
        count: int | None = None,
        scale: str = "auto",
    ):
        session = get_session(session_id)
        persp = Perspective(perspective)
        anchors = None
        parsed_map = None
        if target_map is not None:
            parsed_map = _parse_target_map_json(target_map)
        elif targets is not None:
            values = sorted({float(x) for x in targets.split(",") if x})
            if not values:
                raise HTTPException(422, "targets list is empty")
            anchors = analysis._targets_sequence(values)
        elif lo is not None and hi is not None:
            datasets = analysis.select_datasets(
                session.collection, func_id=func_id, dimension=dim, alg_ids=_csv_list(algs)
            )
            anchors = analysis.resolve_anchors(
                datasets, persp, lo=lo, hi=hi, step=step, count=count, scale=Scale(scale)
            )
        curves, meta = analysis.ecdf_curves(
            session.collection,
            dim,
            _csv_list(algs),
            func_id=func_id,
            targets=anchors,
            target_map=parsed_map,
            perspective=persp,
        )
        payload = analysis.ecdf_payload(curves, meta)
        payload.update({"dim": dim, "func": func_id})
        return _json(payload)

    @app.get("/api/sessions/{session_id}/auc")
    def auc_endpoint(
        session_id: str,
        dim: int = Query(),
        func_id: str | None = Query(default=None, alias="func"),
        algs: str | None = None,
        target_map: str | None = None,
        tmin: float | None = None,
        tmax: float | None = None,
        fmt: str = Query(default="json", alias="format"),
    ):
        session = get_session(session_id)
        parsed_map = _parse_target_map_json(target_map) if target_map is not None else None
        curves, meta = analysis.ecdf_curves(
            session.collection, dim, _csv_list(algs), func_id=func_id, target_map=parsed_map
        )
        lo, hi = analysis.default_auc_range(curves)
        lo = tmin if tmin is not None else lo
        hi = tmax if tmax is not None else hi
        table = analysis.auc_table(curves, lo, hi)
        if fmt != "json":
            return _table_response(table, fmt)
        return _json(
            {"tMin": lo, "tMax": hi, **meta, "auc": {row[0]: row[1] for row in table.rows}}
        )

    @app.get("/api/sessions/{session_id}/test")
    def test_endpoint(
        session_id: str,
        func_id: str = Query(alias="func"),
        dim: int = Query(),
        algs: str | None = None,
        target: float | None = None,
        alpha: float = 0.01,
        fmt: str = Query(default="json", alias="format"),
    ):
        session = get_session(session_id)
        payload = analysis.ks_payload(
            session.collection, func_id, dim, _csv_list(algs), target=target, alpha=alpha
        )
        if fmt != "json":
            return _table_response(analysis.ks_table(payload), fmt)
        return _json(payload)

    @app.get("/api/sessions/{session_id}/rank")
    def rank_endpoint(
        session_id: str,
        dim: int | None = None,
        algs: str | None = None,
        rounds: int = 25,
        seed: int = 0,
        perspective: str = "target",
        fmt: str = Query(default="json", alias="format"),
    ):
        session = get_session(session_id)
        table = analysis.rank_table(
            session.collection,
            dimensions=[dim] if dim is not None else None,
            alg_ids=_csv_list(algs),
            rounds=rounds,
            seed=seed,
            perspective=Perspective(perspective),
        )
        if fmt != "json":
            return _table_response(table, fmt)
        return _json(
            {
                "rounds": rounds,
                "seed": seed,
                "ranking": [dict(zip(table.header, row)) for row in table.rows],
            }
        )

    @app.get("/api/sessions/{session_id}/params")
    def params_endpoint(
        session_id: str,
        func_id: str = Query(alias="func"),
        dim: int = Query(),
        algs: str | None = None,
        param: str | None = None,
        perspective: str = "target",
        lo: float | None = Query(default=None, alias="min"),
        hi: float | None = Query(default=None, alias="max"),
        step: float | None = None,
        count: int | None = None,
        scale: str = "auto",
        fmt: str = Query(default="json", alias="format"),
    ):
        session = get_session(session_id)
        datasets, anchors = resolve(
            session, func_id, dim, algs, perspective, lo, hi, step, count, scale
        )
        table = analysis.params_table(datasets, anchors, _csv_list(param))
        if fmt != "json":
            return _table_response(table, fmt)
        return _json([dict(zip(table.header, row)) for row in table.rows])

    @app.get("/api/sessions/{session_id}/radar")
    def radar_endpoint(session_id: str, dim: int, algs: str | None = None):
        session = get_session(session_id)
        return _json(analysis.radar_payload(session.collection, dim, _csv_list(algs)))

    @app.get("/api/sessions/{session_id}/density")
    def density_endpoint(
        session_id: str,
        anchor: float,
        func_id: str = Query(alias="func"),
        dim: int = Query(),
        algs: str | None = None,
        perspective: str = "target",
    ):
        from . import stats as _stats
        from .align import AnchorSequence
        from .errors import TooFewPoints

        import numpy as np

        session = get_session(session_id)
        datasets = analysis.select_datasets(
            session.collection, func_id=func_id, dimension=dim, alg_ids=_csv_list(algs)
        )
        persp = Perspective(perspective)
        seq = AnchorSequence(
            np.array([float(anchor)]), scale=Scale.LINEAR, perspective=persp
        )
        if persp is Perspective.FIXED_BUDGET:
            seq = AnchorSequence(
                np.array([float(int(anchor))]), scale=Scale.LINEAR, perspective=persp
            )
        series = []
        for ds in datasets:
            sample = analysis.align(ds, seq).per_run[:, 0]
            finite = sample[np.isfinite(sample)]
            entry = {"algId": ds.alg_id, "sample": sample}
            if len(finite) >= 2:
                try:
                    width, edges = _stats.fd_bins(finite)
                    hist, _ = np.histogram(finite, bins=edges)
                    entry["histogram"] = {
                        "edges": edges,
                        "counts": hist,
                        "width": width,
                    }
                    dens = _stats.kde(finite)
                    entry["density"] = {
                        "support": dens.support,
                        "density": dens.density,
                        "bandwidth": dens.bandwidth,
                    }
                except TooFewPoints:
                    pass
            series.append(entry)
        return _json({"anchor": anchor, "perspective": persp.value, "series": series})

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
