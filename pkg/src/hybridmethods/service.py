"""HTTP/JSON facade over the mining, ranking and construction engine.

The server owns all agreement arithmetic; clients only display what the
endpoints return. Sessions are held in an in-memory store keyed by
unguessable ids, expire after a TTL and may be snapshotted to disk as their
event logs (rebuilt by replay on startup).
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .catalog import ItemCatalog, default_catalog
from .constructor import (
    ConstructionSession,
    ConstructionState,
    enumerate_cores,
    enumerate_frames,
    extend_core,
)
from .dataset import CleaningPolicy, Filter, RawResponseTable, load_clean_csv
from .errors import (
    ConfigurationError,
    DegenerateSubsetError,
    DegenerateTableError,
    EngineError,
    IneligiblePracticeError,
    NotChosenError,
    ParseError,
    UnknownItemError,
    UnknownSessionError,
    UnknownVariableError,
)
from .miner import PRACTICE_THRESHOLD_DEFAULT, METHOD_THRESHOLD_DEFAULT, practices_in_context
from .variants import rank_variants

SESSION_TTL_DEFAULT = 24 * 3600


@dataclass
class ServiceConfig:
    data_path: str | Path
    catalog: ItemCatalog | None = None
    policy: CleaningPolicy | None = None
    session_ttl: float = SESSION_TTL_DEFAULT
    snapshot_path: str | Path | None = None


@dataclass
class _StoredSession:
    session: ConstructionSession
    created: float
    expires: float
    lock: threading.Lock = field(default_factory=threading.Lock)
    config: dict = field(default_factory=dict)


class SessionStore:
    """TTL-bound registry of construction sessions."""

    def __init__(self, ttl: float):
        self.ttl = ttl
        self._sessions: dict[str, _StoredSession] = {}
        self._lock = threading.Lock()

    def create(self, session: ConstructionSession, config: dict) -> tuple[str, _StoredSession]:
        now = time.time()
        sid = secrets.token_urlsafe(16)
        stored = _StoredSession(session=session, created=now,
                                expires=now + self.ttl, config=config)
        with self._lock:
            self._evict(now)
            self._sessions[sid] = stored
        return sid, stored

    def get(self, sid: str) -> _StoredSession:
        with self._lock:
            self._evict(time.time())
            stored = self._sessions.get(sid)
        if stored is None:
            raise UnknownSessionError(f"unknown session {sid!r}")
        return stored

    def _evict(self, now: float) -> None:
        expired = [sid for sid, s in self._sessions.items() if s.expires <= now]
        for sid in expired:
            del self._sessions[sid]

    def snapshot(self) -> dict:
        with self._lock:
            return {sid: {"config": s.config,
                          "events": list(s.session.events),
                          "created": s.created,
                          "expires": s.expires}
                    for sid, s in self._sessions.items()}

    def restore(self, sid: str, stored: _StoredSession) -> None:
        with self._lock:
            self._sessions[sid] = stored


class SessionCreate(BaseModel):
    frame: list[str]
    filter: str | None = None
    core: list[str] = []
    set_size: int | None = None
    threshold: float = PRACTICE_THRESHOLD_DEFAULT


class PracticeAdd(BaseModel):
    item_id: str


def _error_body(code: str, message: str) -> dict:
    return {"error": {"code": code, "message": message}}


_STATUS_BY_ERROR = (
    (RequestValidationError, 400, "malformed_request"),
    (UnknownSessionError, 404, "unknown_session"),
    (UnknownItemError, 404, "unknown_item"),
    (UnknownVariableError, 404, "unknown_variable"),
    (IneligiblePracticeError, 409, "ineligible_practice"),
    (NotChosenError, 409, "not_chosen"),
    (DegenerateSubsetError, 422, "degenerate_subset"),
    (DegenerateTableError, 422, "degenerate_table"),
    (ConfigurationError, 400, "configuration_error"),
    (ParseError, 400, "parse_error"),
    (ValueError, 400, "invalid_value"),
)


def create_app(config: ServiceConfig) -> FastAPI:
    catalog = config.catalog or default_catalog()
    policy = config.policy or CleaningPolicy()
    table: RawResponseTable = load_clean_csv(config.data_path)
    store = SessionStore(ttl=config.session_ttl)

    app = FastAPI(title="hybridmethods", version="0.1.0")
    app.state.store = store
    app.state.table = table
    app.state.catalog = catalog

    for exc_type, status, code in _STATUS_BY_ERROR:
        def handler(request: Request, exc, status=status, code=code):
            return JSONResponse(status_code=status,
                                content=_error_body(code, str(exc)))
        app.add_exception_handler(exc_type, handler)

    def parse_frame(ids: str) -> tuple[str, ...]:
        members = [m for m in ids.split(",") if m]
        if not members:
            raise ValueError("empty frame")
        return catalog.sort_members(catalog.resolve_many(members))

    def session_body(sid: str, stored: _StoredSession) -> dict:
        state: ConstructionState = stored.session.state()
        return {
            "id": sid,
            "frame": {
                "members": list(state.frame),
                "labels": [catalog.label_of(m) for m in state.frame],
            },
            "filter": state.filter_text,
            "core": list(state.core),
            "set_size": state.set_size,
            "threshold": state.threshold,
            "subset_n": state.subset_n,
            "chosen": [{**e.as_dict(), "label": catalog.label_of(e.practice)}
                       for e in state.chosen],
            "candidates": [{**c.as_dict(), "label": catalog.label_of(c.practice)}
                           for c in state.candidates],
            "interval": state.interval.as_dict() if state.interval else None,
            "min_agreement": state.min_agreement,
        }

    def persist() -> None:
        if config.snapshot_path is None:
            return
        Path(config.snapshot_path).write_text(
            json.dumps(store.snapshot(), indent=2), encoding="utf-8")

    @app.get("/catalog")
    def get_catalog():
        return {"items": [{"id": i.id, "kind": i.kind.value, "label": i.label}
                          for i in catalog]}

    @app.get("/frames")
    def get_frames(threshold: float = METHOD_THRESHOLD_DEFAULT,
                   filter: str | None = None):
        frames = enumerate_frames(table, Filter.parse(filter), policy, catalog,
                                  threshold=threshold)
        return {"frames": [f.as_dict() for f in frames]}

    @app.get("/cores")
    def get_cores(threshold: float = PRACTICE_THRESHOLD_DEFAULT,
                  filter: str | None = None, size: int = 2):
        cores = enumerate_cores(table, Filter.parse(filter), policy, catalog,
                                threshold=threshold, core_size=size)
        return {"cores": [c.as_dict() for c in cores]}

    @app.get("/frames/{ids}/practices")
    def get_frame_practices(ids: str,
                            threshold: float = PRACTICE_THRESHOLD_DEFAULT,
                            filter: str | None = None,
                            core: str | None = None):
        frame = parse_frame(ids)
        flt = Filter.parse(filter)
        if core:
            members = catalog.resolve_many([c for c in core.split(",") if c])
            extensions = extend_core(table, frame, members, flt, policy,
                                     catalog, threshold=threshold)
            return {"frame": list(frame), "core": list(members),
                    "practices": [{"id": e.practice,
                                   "label": catalog.label_of(e.practice),
                                   **e.combined.as_dict()} for e in extensions]}
        found = practices_in_context(table, frame, flt, threshold, policy, catalog)
        return {"frame": list(frame),
                "practices": [{"id": s.members[0],
                               "label": catalog.label_of(s.members[0]),
                               **s.as_dict()} for s in found]}

    @app.get("/frames/{ids}/ranking")
    def get_frame_ranking(ids: str, set_size: int | None = None,
                          threshold: float = PRACTICE_THRESHOLD_DEFAULT,
                          filter: str | None = None):
        frame = parse_frame(ids)
        ranking = rank_variants(table, frame, Filter.parse(filter), threshold,
                                policy, catalog)
        body = ranking.as_dict()
        if set_size is not None:
            body["sizes"] = [s for s in body["sizes"] if s["set_size"] == set_size]
        for entry in body["sizes"]:
            for rank in entry["ranks"]:
                rank["label"] = catalog.label_of(rank["practice"])
        return body

    @app.post("/sessions", status_code=201)
    def create_session(payload: SessionCreate):
        frame = catalog.sort_members(catalog.resolve_many(payload.frame))
        if not frame:
            raise ValueError("frame must not be empty")
        core = catalog.resolve_many(payload.core)
        session = ConstructionSession(
            table, frame, Filter.parse(payload.filter), policy, catalog,
            core=core, set_size=payload.set_size, threshold=payload.threshold)
        sid, stored = store.create(session, config={
            "frame": list(frame), "filter": payload.filter,
            "core": list(core), "set_size": payload.set_size,
            "threshold": payload.threshold})
        persist()
        return session_body(sid, stored)

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        return session_body(sid, store.get(sid))

    @app.post("/sessions/{sid}/practices")
    def add_practice(sid: str, payload: PracticeAdd):
        stored = store.get(sid)
        with stored.lock:
            stored.session.add_practice(catalog.resolve(payload.item_id))
        persist()
        return session_body(sid, stored)

    @app.delete("/sessions/{sid}/practices/{item_id}")
    def remove_practice(sid: str, item_id: str):
        stored = store.get(sid)
        with stored.lock:
            stored.session.remove_practice(catalog.resolve(item_id))
        persist()
        return session_body(sid, stored)

    @app.get("/sessions/{sid}/export")
    def export_session(sid: str):
        stored = store.get(sid)
        return stored.session.export()

    if config.snapshot_path and Path(config.snapshot_path).exists():
        _restore_snapshot(config, table, policy, catalog, store)

    return app


def _restore_snapshot(config: ServiceConfig, table: RawResponseTable,
                      policy: CleaningPolicy, catalog: ItemCatalog,
                      store: SessionStore) -> None:
    data = json.loads(Path(config.snapshot_path).read_text(encoding="utf-8"))
    now = time.time()
    for sid, entry in data.items():
        if entry["expires"] <= now:
            continue
        cfg = entry["config"]
        try:
            session = ConstructionSession(
                table, cfg["frame"], Filter.parse(cfg.get("filter")), policy,
                catalog, core=cfg.get("core", ()),
                set_size=cfg.get("set_size"),
                threshold=cfg.get("threshold", PRACTICE_THRESHOLD_DEFAULT))
            for action, practice in entry["events"]:
                if action == "add":
                    session.add_practice(practice)
                else:
                    session.remove_practice(practice)
        except EngineError:
            continue  # dataset changed under the snapshot; drop the session
        store.restore(sid, _StoredSession(
            session=session, created=entry["created"], expires=entry["expires"],
            config=cfg))
