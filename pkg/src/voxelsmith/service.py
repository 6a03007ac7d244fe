"""HTTP + websocket API hosting interactive sessions for the UI.

Every reply carries a schema version `v` and the session's monotone `seq`.
Per-session requests are serialized by a lock (single writer per session);
the definition store is the one object shared across sessions. World diffs
are kept per session from seq 0 (the initial house load), so concatenating
all diffs reconstructs the current grid exactly.
"""
from __future__ import annotations

import asyncio
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import Config
from .errors import PendingHintError, VoxelsmithError
from .fixtures import box_house, grid_dims, procedural_house, read_catalog
from .generation import OffsetFrequencyModel, ProceduralModel, Prompt, load_offset_params
from .metrics import (
    DEFAULT_SESSION_FILTER,
    expressiveness_curve,
    naturalization_curve,
)
from .naturalize import DefinitionStore, HashedEmbedder, seed_store
from .session import (
    SessionState,
    create_session,
    handle_utterance,
    provide_hint,
)
from .world import BlockType, Coord, Ray, VoxelGrid, load_house

API_VERSION = 1


class CursorModel(BaseModel):
    origin: tuple[float, float, float]
    direction: tuple[float, float, float]

    def to_ray(self) -> Ray:
        return Ray(tuple(self.origin), tuple(self.direction))


class PromptBlockModel(BaseModel):
    dx: int
    dy: int
    dz: int
    t: int


class CreateSessionRequest(BaseModel):
    v: int = API_VERSION
    house_id: str
    session_index: int = 1


class UtteranceRequest(BaseModel):
    v: int = API_VERSION
    text: str
    cursor: Optional[CursorModel] = None


class HintRequest(BaseModel):
    v: int = API_VERSION
    cursor: CursorModel
    prompt: Optional[list[PromptBlockModel]] = None


@dataclass
class LiveSession:
    state: SessionState
    diffs: list[dict] = field(default_factory=list)
    seq: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)

    def push_diff(self, placed, removed) -> int:
        self.diffs.append(
            {"seq": self.seq, "placed": [list(c) for c in placed], "removed": [list(c) for c in removed]}
        )
        self.seq += 1
        return self.seq - 1


def _grid_cells_json(grid: VoxelGrid):
    return [
        (c.x, c.y, c.z, int(cell.type), cell.label.value if cell.label else None)
        for c, cell in sorted(grid.cells.items(), key=lambda kv: kv[0].yxz())
    ]


def _prompt_from_request(blocks: Optional[list[PromptBlockModel]]) -> Optional[Prompt]:
    if not blocks:
        return None
    return Prompt(tuple((Coord(b.dx, b.dy, b.dz), BlockType(b.t)) for b in blocks))


def create_app(config: Optional[Config] = None) -> FastAPI:
    config = config or Config()
    app = FastAPI(title="voxelsmith", version="0.1.0")

    store = seed_store(DefinitionStore(
        embedder=HashedEmbedder(dim=config.embed_dim),
        threshold=config.similarity_threshold,
    ))
    if config.default_model == "statistical":
        if config.offset_params_path:
            table = load_offset_params(Path(config.offset_params_path).read_text(encoding="utf-8"))
            model = OffsetFrequencyModel(table)
        else:
            model = OffsetFrequencyModel.fit([procedural_house(i) for i in range(8)])
    else:
        model = ProceduralModel()

    houses: dict[str, VoxelGrid] = {}
    if config.houses_dir:
        houses_dir = Path(config.houses_dir)
        for entry in read_catalog(houses_dir):
            houses[entry.house_id] = load_house(
                (houses_dir / entry.path).read_text(encoding="utf-8"))
    else:
        houses["box_house"] = box_house()
        for i in range(4):
            houses[f"house_{i:03d}"] = procedural_house(i, origin=Coord(8, 0, 8))

    sessions: dict[str, LiveSession] = {}
    app.state.store = store
    app.state.sessions = sessions
    app.state.houses = houses

    def _session_or_none(session_id: str) -> Optional[LiveSession]:
        return sessions.get(session_id)

    def _unknown_session() -> JSONResponse:
        return JSONResponse(status_code=404, content={"v": API_VERSION, "error": "unknown_session"})

    @app.get("/v1/houses")
    def list_houses():
        return {
            "v": API_VERSION,
            "houses": [
                {"house_id": hid, "dims": list(grid_dims(grid))}
                for hid, grid in sorted(houses.items())
            ],
        }

    @app.post("/v1/sessions")
    def create(req: CreateSessionRequest):
        grid = houses.get(req.house_id)
        if grid is None:
            return JSONResponse(status_code=404,
                                content={"v": API_VERSION, "error": "unknown_house"})
        try:
            state = create_session(
                grid, store,
                house_id=req.house_id, session_index=req.session_index,
                model=model, config=config,
            )
        except ValueError as e:
            return JSONResponse(status_code=422,
                                content={"v": API_VERSION, "error": str(e)})
        live = LiveSession(state=state)
        live.push_diff(_grid_cells_json(grid), [])
        sessions[state.session_id] = live
        return {
            "v": API_VERSION,
            "session_id": state.session_id,
            "house_id": req.house_id,
            "session_index": req.session_index,
            "seq": live.seq - 1,
            "dims": list(grid_dims(grid)),
        }

    @app.post("/v1/sessions/{session_id}/utterance")
    def post_utterance(session_id: str, req: UtteranceRequest):
        live = _session_or_none(session_id)
        if live is None:
            return _unknown_session()
        with live.lock:
            cursor = req.cursor.to_ray() if req.cursor else None
            try:
                reply, state = handle_utterance(live.state, req.text, cursor)
            except PendingHintError:
                return {
                    "v": API_VERSION,
                    "seq": live.seq - 1,
                    "error": "needs_hint_first",
                    "agent_text": "I still need a hint for the pending build "
                                  "(POST a hint or cancel).",
                }
            live.state = state
            seq = live.push_diff(reply.placed, reply.removed)
            return {
                "v": API_VERSION,
                "seq": seq,
                "agent_text": reply.text,
                "classification": reply.resolution.value,
                "needs_hint": reply.needs_hint,
                "diff": {
                    "placed": [list(c) for c in reply.placed],
                    "removed": [list(c) for c in reply.removed],
                },
            }

    @app.post("/v1/sessions/{session_id}/hint")
    def post_hint(session_id: str, req: HintRequest):
        live = _session_or_none(session_id)
        if live is None:
            return _unknown_session()
        with live.lock:
            try:
                prompt = _prompt_from_request(req.prompt)
            except ValueError as e:
                return JSONResponse(status_code=422,
                                    content={"v": API_VERSION, "error": str(e)})
            try:
                reply, state = provide_hint(live.state, req.cursor.to_ray(), prompt)
            except PendingHintError as e:
                return JSONResponse(status_code=409,
                                    content={"v": API_VERSION, "error": str(e)})
            live.state = state
            seq = live.push_diff(reply.placed, reply.removed)
            return {
                "v": API_VERSION,
                "seq": seq,
                "agent_text": reply.text,
                "classification": reply.resolution.value,
                "needs_hint": reply.needs_hint,
                "diff": {
                    "placed": [list(c) for c in reply.placed],
                    "removed": [list(c) for c in reply.removed],
                },
            }

    @app.get("/v1/sessions/{session_id}/world")
    def world(session_id: str, since_seq: int = -1):
        live = _session_or_none(session_id)
        if live is None:
            return _unknown_session()
        with live.lock:
            return {
                "v": API_VERSION,
                "seq": live.seq - 1,
                "cells": _grid_cells_json(live.state.grid),
                "diffs": [d for d in live.diffs if d["seq"] > since_seq],
            }

    @app.get("/v1/definitions")
    def definitions():
        return {
            "v": API_VERSION,
            "entries": [
                {
                    "head": e.head.raw,
                    "body": list(e.body_raws()),
                    "author": e.author,
                    "created_at": e.created_at,
                }
                for e in store.entries
            ],
        }

    @app.get("/v1/metrics")
    def metrics(sessions_filter: str = "2,3"):
        try:
            wanted = frozenset(int(s) for s in sessions_filter.split(",") if s.strip())
        except ValueError:
            wanted = DEFAULT_SESSION_FILTER
        logs = [live.state.log for live in sessions.values()]
        nat = naturalization_curve(logs, wanted)
        expr = expressiveness_curve(logs, wanted)
        return {
            "v": API_VERSION,
            "naturalization": [
                [p.exchange_index, p.frac_core, p.frac_induced, p.frac_unparsable] for p in nat
            ],
            "expressiveness": [[i, m] for i, m in expr],
        }

    @app.websocket("/v1/sessions/{session_id}/stream")
    async def stream(ws: WebSocket, since_seq: int = -1):
        session_id = ws.path_params["session_id"]
        await ws.accept()
        live = sessions.get(session_id)
        if live is None:
            await ws.send_json({"v": API_VERSION, "error": "unknown_session"})
            await ws.close()
            return
        cursor = since_seq
        try:
            while True:
                pending = [d for d in live.diffs if d["seq"] > cursor]
                for d in pending:
                    await ws.send_json({"v": API_VERSION, **d})
                    cursor = d["seq"]
                # poll for client close between diff batches
                try:
                    message = await asyncio.wait_for(ws.receive(), timeout=0.05)
                    if message.get("type") == "websocket.disconnect":
                        return
                except asyncio.TimeoutError:
                    continue
        except WebSocketDisconnect:
            return

    @app.exception_handler(VoxelsmithError)
    async def on_domain_error(_request, exc: VoxelsmithError):
        return JSONResponse(status_code=422, content={"v": API_VERSION, "error": str(exc)})

    return app
