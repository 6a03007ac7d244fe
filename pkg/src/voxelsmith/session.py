"""One user session: lookup -> parse -> resolve -> execute -> log.

An utterance flows through three stages: definitions (`def:` syntax) are
validated and stored; anything else is first checked against the shared
definition store and, on a hit, expanded and executed leaf by leaf; only
then does the core grammar run. Every exchange is logged with enough
detail (cursor rays, hint events, diffs) to replay the session exactly.
"""
from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

from .config import Config
from .errors import (
    DefinitionSyntaxError,
    PendingHintError,
    SnapshotError,
    StoreError,
)
from .generation import (
    ConstraintSet,
    GenerationResult,
    GeneratorModel,
    NeedsHint,
    ProceduralModel,
    Prompt,
    cursor_location,
    generate,
    resolve_length,
    resolve_location,
)
from .grammar import (
    BuildCommand,
    Conversational,
    DestroyCommand,
    Unparsable,
    Utterance,
    is_definition,
    parse_core,
    parse_definition,
)
from .naturalize import DefinitionStore, define, expand, lookup
from .errors import ExpansionCycleError, ExpansionDepthError
from .world import BlockType, Cell, Coord, Ray, SegmentLabel, VoxelGrid, raycast_hit, remove_blocks, segment

SNAPSHOT_VERSION = 1
LOG_VERSION = 1


class Resolution(str, Enum):
    CORE = "core"
    INDUCED = "induced"
    UNPARSABLE = "unparsable"
    CONVERSATIONAL = "conversational"
    DEFINITION = "definition"


class Classification(str, Enum):
    CORE = "core"
    INDUCED = "induced"
    UNPARSABLE = "unparsable"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class SubExchange:
    """Classification of one body command inside a definition exchange."""

    raw: str
    classification: Classification
    matched_body: Optional[tuple[str, ...]] = None  # set when the body command is induced


@dataclass(frozen=True)
class LeafResult:
    raw: str
    ok: bool
    reason: Optional[str] = None


@dataclass(frozen=True)
class HintEvent:
    cursor: Ray
    prompt: Optional[Prompt]
    resolved: bool


PlacedCell = tuple[int, int, int, int, Optional[str]]  # x, y, z, type id, label


def _cells_json(cells: Sequence[tuple[Coord, Cell]]) -> tuple[PlacedCell, ...]:
    return tuple(
        (c.x, c.y, c.z, int(cell.type), cell.label.value if cell.label else None)
        for c, cell in cells
    )


@dataclass(frozen=True)
class Exchange:
    raw: str
    resolution: Resolution
    cursor: Optional[Ray] = None
    reason: Optional[str] = None
    sub_exchanges: tuple[SubExchange, ...] = ()
    actions: tuple[tuple[str, dict], ...] = ()
    placed: tuple[PlacedCell, ...] = ()
    removed: tuple[PlacedCell, ...] = ()
    matched_head: Optional[str] = None
    matched_body: Optional[tuple[str, ...]] = None
    leaves: tuple[LeafResult, ...] = ()
    pending: bool = False
    hints: tuple[HintEvent, ...] = ()
    started_at: float = 0.0
    finished_at: float = 0.0


@dataclass(frozen=True)
class SessionLog:
    session_id: str
    house_id: str
    session_index: int
    exchanges: tuple[Exchange, ...] = ()

    def append(self, exchange: Exchange) -> "SessionLog":
        return replace(self, exchanges=self.exchanges + (exchange,))

    def update(self, index: int, exchange: Exchange) -> "SessionLog":
        exchanges = list(self.exchanges)
        exchanges[index] = exchange
        return replace(self, exchanges=tuple(exchanges))


@dataclass(frozen=True)
class PendingBuild:
    label: SegmentLabel
    length: int
    exchange_index: int


@dataclass(frozen=True)
class AgentReply:
    text: str
    resolution: Resolution
    needs_hint: bool = False
    placed: tuple[PlacedCell, ...] = ()
    removed: tuple[PlacedCell, ...] = ()


@dataclass(frozen=True)
class SessionState:
    session_id: str
    house_id: str
    session_index: int
    grid: VoxelGrid
    store: DefinitionStore
    model: GeneratorModel
    config: Config = field(default_factory=Config)
    pending: Optional[PendingBuild] = None
    log: SessionLog = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.session_index not in (1, 2, 3):
            raise ValueError("session_index must be 1, 2, or 3")
        if self.log is None:
            object.__setattr__(
                self,
                "log",
                SessionLog(self.session_id, self.house_id, self.session_index),
            )


def create_session(
    grid: VoxelGrid,
    store: DefinitionStore,
    *,
    house_id: str = "house",
    session_index: int = 1,
    model: Optional[GeneratorModel] = None,
    config: Optional[Config] = None,
    session_id: Optional[str] = None,
) -> SessionState:
    return SessionState(
        session_id=session_id or uuid.uuid4().hex[:12],
        house_id=house_id,
        session_index=session_index,
        grid=grid,
        store=store,
        model=model or ProceduralModel(),
        config=config or Config(),
    )


# ---------------------------------------------------------------------------
# Execution helpers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _StepOutcome:
    ok: bool
    reason: Optional[str]
    grid: VoxelGrid
    action: Optional[tuple[str, dict]]
    placed: tuple[PlacedCell, ...] = ()
    removed: tuple[PlacedCell, ...] = ()
    needs_hint: bool = False


def _run_generation(
    grid: VoxelGrid,
    label: SegmentLabel,
    length: int,
    location: Coord,
    prompt: Optional[Prompt],
    model: GeneratorModel,
    config: Config,
) -> _StepOutcome:
    result: GenerationResult = generate(
        grid,
        label,
        ConstraintSet(location, length, prompt),
        model,
        seed=config.rng_seed,
        patch_side=config.patch_side,
        global_side=config.global_side,
        history_len=config.history_len,
    )
    placed_cells = _cells_json(
        [(s.coord, Cell(s.type, label)) for s in (*result.prompt_steps, *result.steps)]
    )
    action = (
        "build",
        {
            "label": label.value,
            "length": length,
            "location": [location.x, location.y, location.z],
            "stop": result.stop.value,
            "placed": [list(c) for c in placed_cells],
        },
    )
    if not placed_cells:
        return _StepOutcome(False, "no room to build there", grid, action)
    return _StepOutcome(True, None, result.grid, action, placed=placed_cells)


def _execute_build(
    grid: VoxelGrid,
    ast: BuildCommand,
    cursor: Optional[Ray],
    model: GeneratorModel,
    config: Config,
) -> _StepOutcome:
    length = resolve_length(ast.length if ast.length is not None else ast.size)
    loc = resolve_location(grid, ast.relloc, cursor)
    if isinstance(loc, NeedsHint) and ast.relloc is not None and cursor is not None:
        # The user's cursor stands in for the hint the agent would ask for.
        fallback = cursor_location(grid, cursor)
        if fallback is not None:
            loc = fallback
    if isinstance(loc, NeedsHint):
        return _StepOutcome(False, loc.reason, grid, None, needs_hint=True)
    return _run_generation(grid, ast.label, length, loc, None, model, config)


def _nearest_instance(instances, cursor: Optional[Ray], grid: VoxelGrid):
    """Cursor-pointed instance when available, else the largest."""
    if cursor is not None:
        hit = raycast_hit(grid, cursor)
        if hit is not None:
            for inst in instances:
                if hit.coord in inst.voxels:
                    return inst

        def ray_dist(inst) -> float:
            ox, oy, oz = cursor.origin
            dx, dy, dz = cursor.direction
            best = float("inf")
            for v in inst.voxels:
                px, py, pz = v.x + 0.5 - ox, v.y + 0.5 - oy, v.z + 0.5 - oz
                t = max(0.0, px * dx + py * dy + pz * dz)
                d2 = (px - t * dx) ** 2 + (py - t * dy) ** 2 + (pz - t * dz) ** 2
                if d2 < best:
                    best = d2
            return best

        return min(instances, key=lambda i: (ray_dist(i), i.min_voxel().yxz()))
    return min(instances, key=lambda i: (-len(i.voxels), i.min_voxel().yxz()))


def _execute_destroy(grid: VoxelGrid, ast: DestroyCommand, cursor: Optional[Ray]) -> _StepOutcome:
    instances = [i for i in segment(grid) if i.label == ast.label]
    if not instances:
        return _StepOutcome(False, f"no {ast.label.value} in the scene", grid, None)
    target = _nearest_instance(instances, cursor, grid)
    removed_cells = _cells_json(
        sorted(
            ((c, grid.get(c)) for c in target.voxels),
            key=lambda pair: pair[0].yxz(),
        )
    )
    action = (
        "destroy",
        {"label": ast.label.value, "removed": [list(c) for c in removed_cells]},
    )
    return _StepOutcome(
        True, None, remove_blocks(grid, target.voxels), action, removed=removed_cells
    )


# ---------------------------------------------------------------------------
# The main pipeline
# ---------------------------------------------------------------------------

def handle_utterance(
    state: SessionState, raw: str, cursor: Optional[Ray] = None
) -> tuple[AgentReply, SessionState]:
    """Route one utterance through definition / store / core-grammar stages."""
    if state.pending is not None:
        raise PendingHintError(
            "a build is waiting for a hint; call provide_hint or cancel_pending first")
    started = time.time()

    pending_request: Optional[tuple[SegmentLabel, int]] = None
    if is_definition(raw):
        reply, exchange = _handle_definition(state, raw)
    else:
        utterance = Utterance.from_raw(raw)
        hit = lookup(state.store, utterance) if utterance.tokens else None
        if hit is not None:
            reply, exchange, state = _handle_induced(state, utterance, hit[0], cursor)
        else:
            reply, exchange, state, pending_request = _handle_core(state, utterance, cursor)

    exchange = replace(exchange, started_at=started, finished_at=time.time(), cursor=cursor)
    new_log = state.log.append(exchange)
    pending = state.pending
    if pending_request is not None:
        label, length = pending_request
        pending = PendingBuild(label, length, exchange_index=len(new_log.exchanges) - 1)
    return reply, replace(state, log=new_log, pending=pending)


def _handle_definition(state: SessionState, raw: str) -> tuple[AgentReply, Exchange]:
    try:
        ast = parse_definition(raw)
    except DefinitionSyntaxError as e:
        reason = f"definition syntax: {e}"
        return (
            AgentReply(f"I couldn't read that definition: {e}", Resolution.UNPARSABLE),
            Exchange(raw, Resolution.UNPARSABLE, reason=reason),
        )
    subs: list[SubExchange] = []
    for body_cmd in ast.body:
        hit = lookup(state.store, body_cmd)
        if hit is not None:
            subs.append(
                SubExchange(body_cmd.raw, Classification.INDUCED, hit[0].body_raws())
            )
            continue
        parsed = parse_core(body_cmd)
        if isinstance(parsed, (BuildCommand, DestroyCommand)):
            subs.append(SubExchange(body_cmd.raw, Classification.CORE))
            continue
        reason = (
            parsed.reason if isinstance(parsed, Unparsable) else "not an executable command"
        )
        full_reason = f"definition body {body_cmd.raw!r} is not known: {reason}"
        return (
            AgentReply(f"I don't know how to do {body_cmd.raw!r} yet ({reason}).",
                       Resolution.UNPARSABLE),
            Exchange(raw, Resolution.UNPARSABLE, reason=full_reason),
        )
    try:
        define(state.store, ast.head, list(ast.body), author=state.session_id)
    except StoreError as e:
        return (
            AgentReply(f"I can't store that definition: {e}", Resolution.UNPARSABLE),
            Exchange(raw, Resolution.UNPARSABLE, reason=str(e)),
        )
    return (
        AgentReply(
            f"Got it — {ast.head.raw!r} now means {len(ast.body)} command(s).",
            Resolution.DEFINITION,
        ),
        Exchange(raw, Resolution.DEFINITION, sub_exchanges=tuple(subs)),
    )


def _handle_induced(
    state: SessionState,
    utterance: Utterance,
    entry,
    cursor: Optional[Ray],
) -> tuple[AgentReply, Exchange, SessionState]:
    try:
        leaves = expand(state.store, utterance, max_depth=state.config.max_expand_depth)
    except (ExpansionCycleError, ExpansionDepthError) as e:
        exchange = Exchange(
            utterance.raw,
            Resolution.UNPARSABLE,
            reason=str(e),
            matched_head=entry.head.raw,
            matched_body=entry.body_raws(),
        )
        return AgentReply(f"That definition loops: {e}", Resolution.UNPARSABLE), exchange, state

    grid = state.grid
    leaf_results: list[LeafResult] = []
    actions: list[tuple[str, dict]] = []
    placed: list[PlacedCell] = []
    removed: list[PlacedCell] = []
    failure: Optional[str] = None
    for leaf in leaves:
        outcome = _execute_leaf(grid, leaf, cursor, state.model, state.config)
        leaf_results.append(LeafResult(leaf.raw, outcome.ok, outcome.reason))
        if outcome.action is not None:
            actions.append(outcome.action)
        placed.extend(outcome.placed)
        removed.extend(outcome.removed)
        grid = outcome.grid
        if not outcome.ok:
            failure = f"leaf {leaf.raw!r} failed: {outcome.reason}"
            break

    resolution = Resolution.INDUCED if failure is None else Resolution.UNPARSABLE
    exchange = Exchange(
        utterance.raw,
        resolution,
        reason=failure,
        actions=tuple(actions),
        placed=tuple(placed),
        removed=tuple(removed),
        matched_head=entry.head.raw,
        matched_body=entry.body_raws(),
        leaves=tuple(leaf_results),
    )
    text = (
        f"Done — ran {len(leaf_results)} step(s) for {entry.head.raw!r}."
        if failure is None
        else f"I stopped: {failure}"
    )
    return (
        AgentReply(text, resolution, placed=tuple(placed), removed=tuple(removed)),
        exchange,
        replace(state, grid=grid),
    )


def _execute_leaf(
    grid: VoxelGrid,
    leaf: Utterance,
    cursor: Optional[Ray],
    model: GeneratorModel,
    config: Config,
) -> _StepOutcome:
    ast = parse_core(leaf)
    if isinstance(ast, BuildCommand):
        outcome = _execute_build(grid, ast, cursor, model, config)
        if outcome.needs_hint and cursor is None:
            return replace(outcome, reason="needs a location hint (no cursor provided)")
        return outcome
    if isinstance(ast, DestroyCommand):
        return _execute_destroy(grid, ast, cursor)
    reason = ast.reason if isinstance(ast, Unparsable) else "not an executable command"
    return _StepOutcome(False, reason, grid, None)


def _handle_core(
    state: SessionState, utterance: Utterance, cursor: Optional[Ray]
) -> tuple[AgentReply, Exchange, SessionState, Optional[tuple[SegmentLabel, int]]]:
    ast = parse_core(utterance)
    if isinstance(ast, Conversational):
        return (
            AgentReply("Hello! Tell me what to build or destroy.", Resolution.CONVERSATIONAL),
            Exchange(utterance.raw, Resolution.CONVERSATIONAL),
            state,
            None,
        )
    if isinstance(ast, Unparsable):
        return (
            AgentReply(
                f"Sorry, I couldn't parse that ({ast.reason}). "
                "You can teach me with 'def: new command; known command; ...'.",
                Resolution.UNPARSABLE,
            ),
            Exchange(utterance.raw, Resolution.UNPARSABLE, reason=ast.reason),
            state,
            None,
        )
    if isinstance(ast, DestroyCommand):
        outcome = _execute_destroy(state.grid, ast, cursor)
        if not outcome.ok:
            return (
                AgentReply(f"I can't: {outcome.reason}.", Resolution.UNPARSABLE),
                Exchange(utterance.raw, Resolution.UNPARSABLE, reason=outcome.reason),
                state,
                None,
            )
        exchange = Exchange(
            utterance.raw,
            Resolution.CORE,
            actions=(outcome.action,) if outcome.action else (),
            removed=outcome.removed,
        )
        return (
            AgentReply(
                f"Removed {len(outcome.removed)} {ast.label.value} block(s).",
                Resolution.CORE,
                removed=outcome.removed,
            ),
            exchange,
            replace(state, grid=outcome.grid),
            None,
        )
    assert isinstance(ast, BuildCommand)
    outcome = _execute_build(state.grid, ast, cursor, state.model, state.config)
    if outcome.needs_hint:
        length = resolve_length(ast.length if ast.length is not None else ast.size)
        reply = AgentReply(
            f"Where should the {ast.label.value} go? Point your cursor (and optionally "
            "place a prompt) to give me a hint.",
            Resolution.CORE,
            needs_hint=True,
        )
        exchange = Exchange(utterance.raw, Resolution.CORE, pending=True, reason=outcome.reason)
        return reply, exchange, state, (ast.label, length)
    if not outcome.ok:
        return (
            AgentReply(f"I can't: {outcome.reason}.", Resolution.UNPARSABLE),
            Exchange(
                utterance.raw,
                Resolution.UNPARSABLE,
                reason=outcome.reason,
                actions=(outcome.action,) if outcome.action else (),
            ),
            state,
            None,
        )
    exchange = Exchange(
        utterance.raw,
        Resolution.CORE,
        actions=(outcome.action,) if outcome.action else (),
        placed=outcome.placed,
    )
    return (
        AgentReply(
            f"Placed {len(outcome.placed)} {ast.label.value} block(s).",
            Resolution.CORE,
            placed=outcome.placed,
        ),
        exchange,
        replace(state, grid=outcome.grid),
        None,
    )


def provide_hint(
    state: SessionState, cursor: Ray, prompt: Optional[Prompt] = None
) -> tuple[AgentReply, SessionState]:
    """Resolve a pending build with a cursor ray and optional prompt."""
    if state.pending is None:
        raise PendingHintError("no pending hint to satisfy")
    pending = state.pending
    index = pending.exchange_index
    exchange = state.log.exchanges[index]
    location = cursor_location(state.grid, cursor)
    if location is None:
        event = HintEvent(cursor, prompt, resolved=False)
        exchange = replace(exchange, hints=exchange.hints + (event,))
        return (
            AgentReply(
                "Your cursor isn't pointing at the structure — try again.",
                Resolution.CORE,
                needs_hint=True,
            ),
            replace(state, log=state.log.update(index, exchange)),
        )
    outcome = _run_generation(
        state.grid, pending.label, pending.length, location, prompt, state.model, state.config
    )
    event = HintEvent(cursor, prompt, resolved=True)
    exchange = replace(
        exchange,
        hints=exchange.hints + (event,),
        actions=exchange.actions + ((outcome.action,) if outcome.action else ()),
        placed=exchange.placed + outcome.placed,
        pending=False,
        resolution=Resolution.CORE if outcome.ok else Resolution.UNPARSABLE,
        reason=None if outcome.ok else outcome.reason,
        finished_at=time.time(),
    )
    text = (
        f"Placed {len(outcome.placed)} {pending.label.value} block(s)."
        if outcome.ok
        else f"I can't: {outcome.reason}."
    )
    return (
        AgentReply(text, exchange.resolution, placed=outcome.placed),
        replace(
            state,
            grid=outcome.grid,
            pending=None,
            log=state.log.update(index, exchange),
        ),
    )


def cancel_pending(state: SessionState) -> tuple[AgentReply, SessionState]:
    if state.pending is None:
        raise PendingHintError("no pending hint to cancel")
    index = state.pending.exchange_index
    exchange = replace(
        state.log.exchanges[index],
        pending=False,
        resolution=Resolution.UNPARSABLE,
        reason="hint request cancelled",
    )
    return (
        AgentReply("Okay, cancelled.", Resolution.UNPARSABLE),
        replace(state, pending=None, log=state.log.update(index, exchange)),
    )


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def classify_exchange(e: Exchange) -> tuple[Classification, ...]:
    """Metric classifications contributed by one exchange.

    Conversational turns contribute nothing; a definition contributes one
    entry per body command; a build still waiting on its hint counts as
    unparsable (the agent has not completed it).
    """
    if e.resolution is Resolution.CONVERSATIONAL:
        return ()
    if e.resolution is Resolution.DEFINITION:
        return tuple(s.classification for s in e.sub_exchanges)
    if e.pending:
        return (Classification.UNPARSABLE,)
    return ({
        Resolution.CORE: Classification.CORE,
        Resolution.INDUCED: Classification.INDUCED,
        Resolution.UNPARSABLE: Classification.UNPARSABLE,
    }[e.resolution],)


# ---------------------------------------------------------------------------
# Serialization: snapshots and NDJSON session logs
# ---------------------------------------------------------------------------

def _ray_to_json(ray: Optional[Ray]) -> Optional[dict]:
    if ray is None:
        return None
    return {"origin": list(ray.origin), "direction": list(ray.direction)}


def _ray_from_json(doc: Optional[dict]) -> Optional[Ray]:
    if doc is None:
        return None
    return Ray(tuple(doc["origin"]), tuple(doc["direction"]))


def _prompt_to_json(prompt: Optional[Prompt]) -> Optional[dict]:
    if prompt is None:
        return None
    return {"blocks": [[off[0], off[1], off[2], int(t)] for off, t in prompt.blocks]}


def _prompt_from_json(doc: Optional[dict]) -> Optional[Prompt]:
    if doc is None:
        return None
    return Prompt(tuple((Coord(dx, dy, dz), BlockType(t)) for dx, dy, dz, t in doc["blocks"]))


def exchange_to_json(e: Exchange) -> dict:
    return {
        "raw": e.raw,
        "resolution": e.resolution.value,
        "cursor": _ray_to_json(e.cursor),
        "reason": e.reason,
        "sub_exchanges": [
            {
                "raw": s.raw,
                "classification": s.classification.value,
                "matched_body": list(s.matched_body) if s.matched_body else None,
            }
            for s in e.sub_exchanges
        ],
        "actions": [[op, args] for op, args in e.actions],
        "placed": [list(c) for c in e.placed],
        "removed": [list(c) for c in e.removed],
        "matched_head": e.matched_head,
        "matched_body": list(e.matched_body) if e.matched_body else None,
        "leaves": [{"raw": l.raw, "ok": l.ok, "reason": l.reason} for l in e.leaves],
        "pending": e.pending,
        "hints": [
            {
                "cursor": _ray_to_json(h.cursor),
                "prompt": _prompt_to_json(h.prompt),
                "resolved": h.resolved,
            }
            for h in e.hints
        ],
        "started_at": e.started_at,
        "finished_at": e.finished_at,
    }


def exchange_from_json(doc: dict) -> Exchange:
    return Exchange(
        raw=doc["raw"],
        resolution=Resolution(doc["resolution"]),
        cursor=_ray_from_json(doc.get("cursor")),
        reason=doc.get("reason"),
        sub_exchanges=tuple(
            SubExchange(
                s["raw"],
                Classification(s["classification"]),
                tuple(s["matched_body"]) if s.get("matched_body") else None,
            )
            for s in doc.get("sub_exchanges", [])
        ),
        actions=tuple((op, args) for op, args in doc.get("actions", [])),
        placed=tuple(tuple(c) for c in doc.get("placed", [])),
        removed=tuple(tuple(c) for c in doc.get("removed", [])),
        matched_head=doc.get("matched_head"),
        matched_body=tuple(doc["matched_body"]) if doc.get("matched_body") else None,
        leaves=tuple(
            LeafResult(l["raw"], l["ok"], l.get("reason")) for l in doc.get("leaves", [])
        ),
        pending=doc.get("pending", False),
        hints=tuple(
            HintEvent(
                _ray_from_json(h["cursor"]),
                _prompt_from_json(h.get("prompt")),
                h["resolved"],
            )
            for h in doc.get("hints", [])
        ),
        started_at=doc.get("started_at", 0.0),
        finished_at=doc.get("finished_at", 0.0),
    )


def save_log(log: SessionLog, path: str | Path) -> None:
    """One session per file: a header record, then one exchange per line."""
    lines = [
        json.dumps(
            {
                "v": LOG_VERSION,
                "kind": "session",
                "session_id": log.session_id,
                "house_id": log.house_id,
                "session_index": log.session_index,
            }
        )
    ]
    for e in log.exchanges:
        lines.append(json.dumps({"v": LOG_VERSION, "kind": "exchange", **exchange_to_json(e)}))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_log(path: str | Path) -> SessionLog:
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"empty session log: {path}")
    header = json.loads(lines[0])
    if header.get("v") != LOG_VERSION or header.get("kind") != "session":
        raise ValueError(f"bad session log header in {path}")
    exchanges = []
    for ln in lines[1:]:
        doc = json.loads(ln)
        if doc.get("v") != LOG_VERSION or doc.get("kind") != "exchange":
            raise ValueError(f"bad exchange record in {path}")
        exchanges.append(exchange_from_json(doc))
    return SessionLog(
        session_id=header["session_id"],
        house_id=header["house_id"],
        session_index=header["session_index"],
        exchanges=tuple(exchanges),
    )


def snapshot(state: SessionState) -> bytes:
    from .world import save_house

    doc = {
        "v": SNAPSHOT_VERSION,
        "session_id": state.session_id,
        "house_id": state.house_id,
        "session_index": state.session_index,
        "grid": json.loads(save_house(state.grid)),
        "pending": None
        if state.pending is None
        else {
            "label": state.pending.label.value,
            "length": state.pending.length,
            "exchange_index": state.pending.exchange_index,
        },
        "store_ref": state.store.embedder.fingerprint,
        "log": [exchange_to_json(e) for e in state.log.exchanges],
    }
    return json.dumps(doc).encode("utf-8")


def restore(
    data: bytes,
    store: DefinitionStore,
    *,
    model: Optional[GeneratorModel] = None,
    config: Optional[Config] = None,
) -> SessionState:
    from .world import load_house

    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SnapshotError(f"corrupt snapshot: {e}") from e
    if doc.get("v") != SNAPSHOT_VERSION:
        raise SnapshotError(f"unsupported snapshot version: {doc.get('v')!r}")
    if doc.get("store_ref") != store.embedder.fingerprint:
        raise SnapshotError(
            f"snapshot references store {doc.get('store_ref')!r}, "
            f"got {store.embedder.fingerprint!r}")
    pending = None
    if doc.get("pending") is not None:
        p = doc["pending"]
        pending = PendingBuild(SegmentLabel.parse(p["label"]), p["length"], p["exchange_index"])
    return SessionState(
        session_id=doc["session_id"],
        house_id=doc["house_id"],
        session_index=doc["session_index"],
        grid=load_house(json.dumps(doc["grid"])),
        store=store,
        model=model or ProceduralModel(),
        config=config or Config(),
        pending=pending,
        log=SessionLog(
            session_id=doc["session_id"],
            house_id=doc["house_id"],
            session_index=doc["session_index"],
            exchanges=tuple(exchange_from_json(e) for e in doc["log"]),
        ),
    )
