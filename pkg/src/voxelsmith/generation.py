"""Constraint-steered, label-conditioned block generation.

A generation call is steered by three constraints: a start location, a block
count, and an optional user-supplied prompt structure. The generator itself
is swappable (`GeneratorModel`); two reference models ship here:

* `ProceduralModel` — per-label deterministic growth rules, hand-traceable.
* `OffsetFrequencyModel` — offset statistics fitted from a labeled corpus.

Both are pure functions of the generation context, so identical inputs give
identical output block-for-block.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping, Optional, Protocol, Sequence

import numpy as np

from .errors import UnsupportedLabelError
from .grammar import Relation, RelLoc, SizeWord
from .world import (
    NEIGHBORS_6,
    NEIGHBORS_26,
    BlockType,
    Cell,
    Coord,
    Ray,
    SegmentInstance,
    SegmentLabel,
    VoxelGrid,
    bounding_box,
    in_bounds,
    raycast_hit,
    segment,
)

log = logging.getLogger(__name__)

SIZE_TO_BLOCKS = {
    SizeWord.TINY: 2,
    SizeWord.SMALL: 5,
    SizeWord.DEFAULT: 20,
    SizeWord.LARGE: 50,
    SizeWord.HUGE: 100,
}


def resolve_length(size: SizeWord | int) -> int:
    """Block count for a size word; explicit integers pass through."""
    if isinstance(size, SizeWord):
        return SIZE_TO_BLOCKS[size]
    n = int(size)
    if n < 1:
        raise ValueError(f"explicit length must be >= 1, got {n}")
    return n


@dataclass(frozen=True)
class NeedsHint:
    """Location could not be resolved; the agent should ask for a hint."""

    reason: str


@dataclass(frozen=True)
class Prompt:
    """User-placed seed structure, relative to the resolved location.

    Offsets must be distinct and, together with (0,0,0), 26-connected — a
    prompt is a contiguous structure built at the hint spot. This keeps the
    generated set connected regardless of model behavior.
    """

    blocks: tuple[tuple[Coord, BlockType], ...]

    def __post_init__(self) -> None:
        if not self.blocks:
            raise ValueError("prompt must contain at least one block")
        offsets = [Coord(*off) for off, _ in self.blocks]
        if len(set(offsets)) != len(offsets):
            raise ValueError("prompt offsets must be distinct")
        cluster = set(offsets) | {Coord(0, 0, 0)}
        reached = {Coord(0, 0, 0)}
        frontier = [Coord(0, 0, 0)]
        while frontier:
            cur = frontier.pop()
            for dx, dy, dz in NEIGHBORS_26:
                nb = Coord(cur.x + dx, cur.y + dy, cur.z + dz)
                if nb in cluster and nb not in reached:
                    reached.add(nb)
                    frontier.append(nb)
        if reached != cluster:
            raise ValueError("prompt offsets must form one 26-connected cluster around the anchor")


@dataclass(frozen=True)
class ConstraintSet:
    """Resolved steering constraints for one generation call."""

    location: Coord
    length: int
    prompt: Optional[Prompt] = None

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("length must be >= 1")
        if not in_bounds(self.location):
            raise ValueError(f"location out of bounds: {self.location}")


@dataclass(frozen=True)
class PlacementStep:
    coord: Coord
    type: BlockType

    def __post_init__(self) -> None:
        if self.type == BlockType.AIR:
            raise ValueError("placement type cannot be air")


@dataclass
class GeneratorContext:
    """Everything a model may read when proposing the next placement.

    `cell_types` is the evolving occupancy (house + prompt + steps so far);
    `placed` is this episode's trace in order. The local patch and the coarse
    global occupancy view are computed lazily since the reference models key
    off coordinates directly.
    """

    frontier: Coord
    origin: Coord
    history: tuple[PlacementStep, ...]
    placed: tuple[Coord, ...]
    prompt_coords: frozenset[Coord]
    cell_types: Mapping[Coord, int]
    anchor: frozenset[Coord]  # {origin} | prompt | placed
    structure_cells: frozenset[Coord]  # cells present before generation began
    structure_bbox: Optional[tuple[Coord, Coord]]
    structure_count: int
    target_length: int
    seed: int = 0
    patch_side: int = 9
    global_side: int = 16
    _patch_cache: Optional[np.ndarray] = field(default=None, repr=False)
    _global_cache: Optional[np.ndarray] = field(default=None, repr=False)

    def is_empty(self, c: Coord) -> bool:
        return in_bounds(c) and c not in self.cell_types

    def feasible(self, c: Coord) -> bool:
        """Empty, in bounds, and at/26-adjacent-to the generated cluster."""
        if not self.is_empty(c):
            return False
        if c == self.origin:
            return True
        for dx, dy, dz in NEIGHBORS_26:
            if Coord(c.x + dx, c.y + dy, c.z + dz) in self.anchor:
                return True
        return False

    def patch(self) -> np.ndarray:
        """Block-type cube of side `patch_side` centered on the frontier."""
        if self._patch_cache is None:
            r = self.patch_side // 2
            patch = np.zeros((self.patch_side,) * 3, dtype=np.int16)
            fx, fy, fz = self.frontier
            for ix in range(self.patch_side):
                for iy in range(self.patch_side):
                    for iz in range(self.patch_side):
                        patch[ix, iy, iz] = self.cell_types.get(
                            Coord(fx + ix - r, fy + iy - r, fz + iz - r), 0
                        )
            self._patch_cache = patch
        return self._patch_cache

    def global_occupancy(self) -> np.ndarray:
        """Coarse boolean occupancy, world downsampled to `global_side`³."""
        if self._global_cache is None:
            from .world import WORLD_SIDE

            scale = WORLD_SIDE // self.global_side
            occ = np.zeros((self.global_side,) * 3, dtype=bool)
            for c in self.cell_types:
                occ[c.x // scale, c.y // scale, c.z // scale] = True
            self._global_cache = occ
        return self._global_cache


@dataclass(frozen=True)
class GeneratorParams:
    """Per-label parameter entry handed to a model's next_step."""

    label: SegmentLabel
    data: Mapping[str, object]


class GeneratorModel(Protocol):
    def params_for(self, label: SegmentLabel) -> GeneratorParams: ...

    def next_step(self, context: GeneratorContext, params: GeneratorParams) -> Optional[PlacementStep]: ...


class StopReason(str, Enum):
    COMPLETED = "completed"
    EXHAUSTED = "exhausted"  # model ran out of rule-consistent cells
    BLOCKED = "blocked"      # location occupied with no adjacent empty cell


@dataclass(frozen=True)
class GenerationResult:
    steps: tuple[PlacementStep, ...]
    prompt_steps: tuple[PlacementStep, ...]
    skipped_prompt: tuple[Coord, ...]
    grid: VoxelGrid
    stop: StopReason

    @property
    def early_stop(self) -> bool:
        return self.stop is not StopReason.COMPLETED

    @property
    def placed_coords(self) -> tuple[Coord, ...]:
        return tuple(s.coord for s in self.prompt_steps) + tuple(s.coord for s in self.steps)


# Labels whose block type is forced regardless of what a model proposes.
TYPE_OVERRIDES = {
    SegmentLabel.WINDOW: BlockType.GLASS,
    SegmentLabel.BED: BlockType.BED,
}


def generate(
    grid: VoxelGrid,
    label: SegmentLabel,
    constraints: ConstraintSet,
    model: GeneratorModel,
    seed: int = 0,
    *,
    patch_side: int = 9,
    global_side: int = 16,
    history_len: int = 3,
) -> GenerationResult:
    """Run one steered generation episode and return the new grid.

    Prompt blocks are written first (occupied cells skipped), then up to
    `constraints.length` steps are sampled. Every placed cell gets the
    invoked label; window and bed force glass and bed block types.
    """
    params = model.params_for(label)
    origin = constraints.location
    override = TYPE_OVERRIDES.get(label)

    types: dict[Coord, int] = {c: int(cell.type) for c, cell in grid.cells.items()}
    structure_cells = frozenset(types)
    structure_count = len(types)
    structure_bbox = bounding_box(grid) if structure_count else None

    new_cells: dict[Coord, Cell] = {}
    prompt_steps: list[PlacementStep] = []
    skipped: list[Coord] = []
    if constraints.prompt is not None:
        for off, btype in sorted(constraints.prompt.blocks, key=lambda b: Coord(*b[0]).yxz()):
            cell = origin.add(Coord(*off))
            if not in_bounds(cell) or cell in types:
                skipped.append(cell)
                log.debug("prompt block skipped (occupied or out of bounds): %s", cell)
                continue
            btype = override or btype
            prompt_steps.append(PlacementStep(cell, btype))
            types[cell] = int(btype)
            new_cells[cell] = Cell(btype, label)

    anchor: set[Coord] = {origin} | {s.coord for s in prompt_steps}
    placed: list[Coord] = []
    steps: list[PlacementStep] = []
    history: list[PlacementStep] = []

    while len(steps) < constraints.length:
        ctx = GeneratorContext(
            frontier=placed[-1] if placed else origin,
            origin=origin,
            history=tuple(history[-history_len:]),
            placed=tuple(placed),
            prompt_coords=frozenset(s.coord for s in prompt_steps),
            cell_types=types,
            anchor=frozenset(anchor),
            structure_cells=structure_cells,
            structure_bbox=structure_bbox,
            structure_count=structure_count,
            target_length=constraints.length,
            seed=seed,
            patch_side=patch_side,
            global_side=global_side,
        )
        step = model.next_step(ctx, params)
        if step is None:
            break
        coord = step.coord
        # Contract check: empty, in bounds, and attached to the location,
        # the prompt, prior steps, or existing structure.
        if not in_bounds(coord) or coord in types or not _attached(coord, anchor, types, origin):
            log.warning("model proposed an invalid step %s; stopping early", step)
            break
        btype = override or step.type
        step = PlacementStep(coord, btype)
        steps.append(step)
        history.append(step)
        placed.append(coord)
        anchor.add(coord)
        types[coord] = int(btype)
        new_cells[coord] = Cell(btype, label)

    if len(steps) == constraints.length:
        stop = StopReason.COMPLETED
    elif not steps and not prompt_steps and origin in grid.cells and not any(
        c not in grid.cells and in_bounds(c)
        for c in (Coord(origin.x + dx, origin.y + dy, origin.z + dz) for dx, dy, dz in NEIGHBORS_26)
    ):
        stop = StopReason.BLOCKED
    else:
        stop = StopReason.EXHAUSTED

    return GenerationResult(
        steps=tuple(steps),
        prompt_steps=tuple(prompt_steps),
        skipped_prompt=tuple(skipped),
        grid=grid.with_cells(new_cells),
        stop=stop,
    )


def _attached(coord: Coord, anchor: set[Coord], types: Mapping[Coord, int], origin: Coord) -> bool:
    if coord == origin:
        return True
    for dx, dy, dz in NEIGHBORS_26:
        nb = Coord(coord.x + dx, coord.y + dy, coord.z + dz)
        if nb in anchor or nb in types:
            return True
    return False


# ---------------------------------------------------------------------------
# Location resolution
# ---------------------------------------------------------------------------

def cursor_location(grid: VoxelGrid, cursor: Ray) -> Optional[Coord]:
    """Empty cell adjacent to the cursor hit, on the entry face."""
    hit = raycast_hit(grid, cursor)
    if hit is None:
        return None
    if hit.prev is not None and in_bounds(hit.prev) and hit.prev not in grid:
        return hit.prev
    for dx, dy, dz in NEIGHBORS_6:
        nb = Coord(hit.coord.x + dx, hit.coord.y + dy, hit.coord.z + dz)
        if in_bounds(nb) and nb not in grid:
            return nb
    return None


def _pick_instance(instances: Sequence[SegmentInstance]) -> SegmentInstance:
    """Largest instance; ties go to the lowest (y, x, z) minimum voxel."""
    return min(instances, key=lambda i: (-len(i.voxels), i.min_voxel().yxz()))


def _anchor_voxels(grid: VoxelGrid, relloc: RelLoc) -> Optional[frozenset[Coord]]:
    if relloc.anchor is None:
        if len(grid) == 0:
            return None
        return frozenset(grid.coords())
    matches = [i for i in segment(grid) if i.label == relloc.anchor]
    if not matches:
        return None
    return _pick_instance(matches).voxels


def _centroid_column(voxels: Iterable[Coord]) -> tuple[int, int]:
    xs, zs, n = 0, 0, 0
    for v in voxels:
        xs += v.x
        zs += v.z
        n += 1
    return math.floor(xs / n + 0.5), math.floor(zs / n + 0.5)


def resolve_location(
    grid: VoxelGrid,
    relloc: Optional[RelLoc],
    cursor: Optional[Ray] = None,
) -> Coord | NeedsHint:
    """Turn a relative-location phrase or a cursor ray into a start cell."""
    if relloc is not None:
        voxels = _anchor_voxels(grid, relloc)
        if voxels is None:
            what = relloc.anchor.value if relloc.anchor else "house"
            return NeedsHint(f"no {what} in the scene to anchor the location")
        return _resolve_relative(grid, relloc.relation, voxels)
    if cursor is not None:
        loc = cursor_location(grid, cursor)
        if loc is not None:
            return loc
        return NeedsHint("cursor ray does not point at the structure")
    return NeedsHint("no location given; point your cursor or name a spot")


def _resolve_relative(grid: VoxelGrid, relation: Relation, voxels: frozenset[Coord]) -> Coord | NeedsHint:
    if relation is Relation.ON_TOP_OF:
        top = max(v.y for v in voxels)
        for v in sorted((v for v in voxels if v.y == top), key=lambda v: (v.x, v.z)):
            above = Coord(v.x, v.y + 1, v.z)
            if in_bounds(above) and above not in grid:
                return above
        return NeedsHint("no empty cell above the anchor")
    if relation is Relation.NEXT_TO:
        low = min(voxels, key=Coord.yxz)
        for dx, dy, dz in NEIGHBORS_6:
            nb = Coord(low.x + dx, low.y + dy, low.z + dz)
            if in_bounds(nb) and nb not in grid:
                return nb
        return NeedsHint("no empty cell next to the anchor")

    xs = [v.x for v in voxels]
    zs = [v.z for v in voxels]
    cx, cz = _centroid_column(voxels)
    if relation is Relation.IN_FRONT_OF:
        start, step = Coord(cx, 0, min(zs) - 1), (0, 0, -1)
    elif relation is Relation.BEHIND:
        start, step = Coord(cx, 0, max(zs) + 1), (0, 0, 1)
    elif relation is Relation.LEFT_OF:
        start, step = Coord(min(xs) - 1, 0, cz), (-1, 0, 0)
    elif relation is Relation.RIGHT_OF:
        start, step = Coord(max(xs) + 1, 0, cz), (1, 0, 0)
    else:  # pragma: no cover - closed enum
        return NeedsHint(f"unsupported relation {relation}")
    cell = start
    while in_bounds(cell):
        if cell not in grid:
            return cell
        cell = cell.offset(*step)
    return NeedsHint("no empty ground cell on that side")


# ---------------------------------------------------------------------------
# Reference model 1: procedural growth rules
# ---------------------------------------------------------------------------

DEFAULT_BLOCKS: dict[SegmentLabel, BlockType] = {
    SegmentLabel.BALCONY: BlockType.PLANK,
    SegmentLabel.BED: BlockType.BED,
    SegmentLabel.BOOKCASE: BlockType.PLANK,
    SegmentLabel.CEILING: BlockType.PLANK,
    SegmentLabel.COLUMN: BlockType.STONE,
    SegmentLabel.DECK: BlockType.PLANK,
    SegmentLabel.DOOR: BlockType.PLANK,
    SegmentLabel.FENCE: BlockType.FENCE_POST,
    SegmentLabel.FLOOR: BlockType.PLANK,
    SegmentLabel.FOUNDATION: BlockType.STONE,
    SegmentLabel.GARDEN: BlockType.GRASS,
    SegmentLabel.GRASS: BlockType.GRASS,
    SegmentLabel.GROUND: BlockType.DIRT,
    SegmentLabel.LADDER: BlockType.LADDER,
    SegmentLabel.LIGHTS: BlockType.TORCH,
    SegmentLabel.PATIO: BlockType.STONE,
    SegmentLabel.PILLAR: BlockType.STONE,
    SegmentLabel.PORCH: BlockType.PLANK,
    SegmentLabel.RAILING: BlockType.FENCE_POST,
    SegmentLabel.ROOF: BlockType.PLANK,
    SegmentLabel.STAIR: BlockType.STONE,
    SegmentLabel.TORCH: BlockType.TORCH,
    SegmentLabel.WALKWAY: BlockType.STONE,
    SegmentLabel.WALL: BlockType.BRICK,
    SegmentLabel.WINDOW: BlockType.GLASS,
    SegmentLabel.YARD: BlockType.GRASS,
}

_PLANE_LABELS = {SegmentLabel.ROOF, SegmentLabel.FLOOR, SegmentLabel.CEILING, SegmentLabel.FOUNDATION}
_RING_LABELS = {SegmentLabel.FENCE, SegmentLabel.RAILING}
_DIAGONAL_LABELS = {SegmentLabel.STAIR, SegmentLabel.LADDER}
_SURFACE_LABELS = {SegmentLabel.TORCH, SegmentLabel.LIGHTS}


def _ceil_sqrt(n: int) -> int:
    return math.isqrt(n - 1) + 1 if n > 0 else 0


def _wall_candidates(ctx: GeneratorContext) -> Iterator[Coord]:
    """Vertical plane through the origin, parallel to the nearest house face,
    column-major bottom-up, columns ascending from the origin."""
    o = ctx.origin
    span = (1, 0, 0)  # spans x (plane normal z) when there is nothing nearby
    if ctx.structure_bbox is not None:
        lo, hi = ctx.structure_bbox
        faces = (
            (abs(o.z - lo.z), (1, 0, 0)),
            (abs(hi.z - o.z), (1, 0, 0)),
            (abs(o.x - lo.x), (0, 0, 1)),
            (abs(hi.x - o.x), (0, 0, 1)),
        )
        span = min(faces, key=lambda f: f[0])[1]
    height = _ceil_sqrt(ctx.target_length)
    for k in range(ctx.target_length + 8):
        for dy in range(height):
            yield Coord(o.x + span[0] * k, o.y + dy, o.z + span[2] * k)


def _plane_candidates(ctx: GeneratorContext) -> Iterator[Coord]:
    """Horizontal plane at the origin's level, ascending (x, z) scan."""
    o = ctx.origin
    side = _ceil_sqrt(ctx.target_length)
    for dx in range(side + ctx.target_length + 8):
        for dz in range(side):
            yield Coord(o.x + dx, o.y, o.z + dz)


def _window_candidates(ctx: GeneratorContext) -> Iterator[Coord]:
    """Two-high column at the origin, widening rightward (+x)."""
    o = ctx.origin
    for k in range(ctx.target_length + 8):
        for dy in range(2):
            yield Coord(o.x + k, o.y + dy, o.z)


def _door_candidates(ctx: GeneratorContext) -> Iterator[Coord]:
    o = ctx.origin
    yield o
    yield Coord(o.x, o.y + 1, o.z)


def _diagonal_candidates(ctx: GeneratorContext) -> Iterator[Coord]:
    """One up per one horizontal step, heading toward the structure center."""
    o = ctx.origin
    dx, dz = 1, 0
    if ctx.structure_bbox is not None:
        lo, hi = ctx.structure_bbox
        to_cx = (lo.x + hi.x) / 2 - o.x
        to_cz = (lo.z + hi.z) / 2 - o.z
        if abs(to_cz) > abs(to_cx):
            dx, dz = 0, 1 if to_cz >= 0 else -1
        else:
            dx, dz = (1 if to_cx >= 0 else -1), 0
    for k in range(ctx.target_length + 8):
        yield Coord(o.x + dx * k, o.y + k, o.z + dz * k)


def _ring_cells(x0: int, x1: int, z0: int, z1: int, y: int) -> list[Coord]:
    """Rectangle perimeter at level y, clockwise seen from above (+x, +z, -x, -z)."""
    if x0 == x1 and z0 == z1:
        return [Coord(x0, y, z0)]
    cells: list[Coord] = []
    cells.extend(Coord(x, y, z0) for x in range(x0, x1 + 1))
    cells.extend(Coord(x1, y, z) for z in range(z0 + 1, z1 + 1))
    if z1 != z0:
        cells.extend(Coord(x, y, z1) for x in range(x1 - 1, x0 - 1, -1))
    if x1 != x0:
        cells.extend(Coord(x0, y, z) for z in range(z1 - 1, z0, -1))
    return cells


def _ring_candidates(ctx: GeneratorContext) -> Iterator[Coord]:
    """Perimeter path around the house footprint at the origin's level.

    Above the structure the ring sits on the footprint itself (a rooftop
    railing); at or below the top it wraps one cell outside (a yard fence).
    With no structure at all, a free-standing square sized to the target.
    """
    o = ctx.origin
    if ctx.structure_bbox is None:
        side = max(2, -(-(ctx.target_length + 4) // 4))
        ring = _ring_cells(o.x, o.x + side - 1, o.z, o.z + side - 1, o.y)
    else:
        lo, hi = ctx.structure_bbox
        if o.y > hi.y:
            ring = _ring_cells(lo.x, hi.x, lo.z, hi.z, o.y)
        else:
            ring = _ring_cells(lo.x - 1, hi.x + 1, lo.z - 1, hi.z + 1, o.y)
    start = min(
        range(len(ring)),
        key=lambda i: (max(abs(ring[i].x - o.x), abs(ring[i].z - o.z)), ring[i].x, ring[i].z),
    )
    for i in range(len(ring)):
        yield ring[(start + i) % len(ring)]


def _greedy_adjacent(ctx: GeneratorContext, hug_structure: bool) -> Optional[Coord]:
    """Lowest-(y,x,z) empty cell adjacent to the cluster; optionally required
    to touch pre-existing structure (used by torches and lights)."""
    if ctx.is_empty(ctx.origin):
        return ctx.origin
    if hug_structure and not ctx.structure_cells:
        hug_structure = False
    best: Optional[Coord] = None
    for base in ctx.anchor:
        for dx, dy, dz in NEIGHBORS_26:
            c = Coord(base.x + dx, base.y + dy, base.z + dz)
            if not ctx.is_empty(c):
                continue
            if hug_structure:
                if not any(
                    Coord(c.x + ddx, c.y + ddy, c.z + ddz) in ctx.structure_cells
                    for ddx, ddy, ddz in NEIGHBORS_26
                ):
                    continue
            if best is None or c.yxz() < best.yxz():
                best = c
    return best


class ProceduralModel:
    """Deterministic per-label growth rules; supports all 26 labels."""

    def __init__(self, blocks: Optional[Mapping[SegmentLabel, BlockType]] = None):
        table = dict(DEFAULT_BLOCKS)
        if blocks:
            table.update(blocks)
        self._params = {
            label: GeneratorParams(label, {"block": table[label]}) for label in SegmentLabel
        }

    def params_for(self, label: SegmentLabel) -> GeneratorParams:
        try:
            return self._params[label]
        except KeyError:
            raise UnsupportedLabelError(f"no parameters for label {label!r}") from None

    def next_step(self, context: GeneratorContext, params: GeneratorParams) -> Optional[PlacementStep]:
        label = params.label
        block: BlockType = params.data["block"]  # type: ignore[assignment]
        if label == SegmentLabel.WALL:
            candidates: Iterable[Coord] = _wall_candidates(context)
        elif label in _PLANE_LABELS:
            candidates = _plane_candidates(context)
        elif label == SegmentLabel.WINDOW:
            candidates = _window_candidates(context)
        elif label in _RING_LABELS:
            candidates = _ring_candidates(context)
        elif label == SegmentLabel.DOOR:
            candidates = _door_candidates(context)
        elif label in _DIAGONAL_LABELS:
            candidates = _diagonal_candidates(context)
        else:
            pick = _greedy_adjacent(context, hug_structure=label in _SURFACE_LABELS)
            return PlacementStep(pick, block) if pick is not None else None
        for c in candidates:
            if context.feasible(c):
                return PlacementStep(c, block)
        return None


def procedural_next_step(context: GeneratorContext, params: GeneratorParams) -> Optional[PlacementStep]:
    """Functional entry point for the procedural rules."""
    return ProceduralModel().next_step(context, params)


# ---------------------------------------------------------------------------
# Reference model 2: offset-frequency statistics fitted from a corpus
# ---------------------------------------------------------------------------

PARAMS_DOC_VERSION = 1


def fit_offset_model(corpus: Sequence[VoxelGrid]) -> dict[SegmentLabel, GeneratorParams]:
    """Count (offset-from-previous, block type) pairs per label.

    Instances are scanned in ascending (y, x, z); consecutive voxels yield
    one offset observation. Every corpus grid must carry stored labels.
    """
    if not corpus:
        raise ValueError("corpus is empty")
    counts: dict[SegmentLabel, dict[tuple[tuple[int, int, int], int], int]] = {}
    type_counts: dict[SegmentLabel, dict[int, int]] = {}
    for grid in corpus:
        if any(cell.label is None for cell in grid.cells.values()):
            raise ValueError("corpus grids must be fully labeled")
        for inst in segment(grid):
            ordered = sorted(inst.voxels, key=Coord.yxz)
            per_label = counts.setdefault(inst.label, {})
            per_type = type_counts.setdefault(inst.label, {})
            for voxel in ordered:
                cell = grid.get(voxel)
                assert cell is not None
                per_type[int(cell.type)] = per_type.get(int(cell.type), 0) + 1
            for prev, nxt in zip(ordered, ordered[1:]):
                off = (nxt.x - prev.x, nxt.y - prev.y, nxt.z - prev.z)
                cell = grid.get(nxt)
                assert cell is not None
                key = (off, int(cell.type))
                per_label[key] = per_label.get(key, 0) + 1

    table: dict[SegmentLabel, GeneratorParams] = {}
    for label, per_label in counts.items():
        ranked = sorted(per_label.items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1]))
        default_block = min(type_counts[label].items(), key=lambda kv: (-kv[1], kv[0]))[0]
        table[label] = GeneratorParams(
            label,
            {
                "offsets": tuple((off, btype, n) for (off, btype), n in ranked),
                "default_block": default_block,
            },
        )
    return table


class OffsetFrequencyModel:
    """Places the highest-count feasible offset from the frontier."""

    def __init__(self, table: Mapping[SegmentLabel, GeneratorParams]):
        self._table = dict(table)

    @classmethod
    def fit(cls, corpus: Sequence[VoxelGrid]) -> "OffsetFrequencyModel":
        return cls(fit_offset_model(corpus))

    def params_for(self, label: SegmentLabel) -> GeneratorParams:
        try:
            return self._table[label]
        except KeyError:
            raise UnsupportedLabelError(f"label {label.value!r} absent from the corpus") from None

    def next_step(self, context: GeneratorContext, params: GeneratorParams) -> Optional[PlacementStep]:
        default_block = BlockType(params.data["default_block"])  # type: ignore[arg-type]
        if not context.placed and context.is_empty(context.origin):
            return PlacementStep(context.origin, default_block)
        frontier = context.frontier
        for off, btype, _count in params.data["offsets"]:  # type: ignore[union-attr]
            c = Coord(frontier.x + off[0], frontier.y + off[1], frontier.z + off[2])
            if context.feasible(c):
                return PlacementStep(c, BlockType(btype))
        return None


def save_offset_params(table: Mapping[SegmentLabel, GeneratorParams]) -> str:
    """Versioned text document for a fitted offset table."""
    doc = {
        "v": PARAMS_DOC_VERSION,
        "kind": "offset-frequency",
        "labels": {
            label.value: {
                "default_block": params.data["default_block"],
                "offsets": [[*off, btype, n] for off, btype, n in params.data["offsets"]],  # type: ignore[union-attr]
            }
            for label, params in sorted(table.items(), key=lambda kv: kv[0].value)
        },
    }
    return json.dumps(doc, indent=2)


def load_offset_params(text: str) -> dict[SegmentLabel, GeneratorParams]:
    doc = json.loads(text)
    if doc.get("v") != PARAMS_DOC_VERSION or doc.get("kind") != "offset-frequency":
        raise ValueError("unsupported params document")
    table: dict[SegmentLabel, GeneratorParams] = {}
    for name, entry in doc["labels"].items():
        label = SegmentLabel.parse(name)
        offsets = tuple(((dx, dy, dz), btype, n) for dx, dy, dz, btype, n in entry["offsets"])
        table[label] = GeneratorParams(
            label, {"offsets": offsets, "default_block": int(entry["default_block"])}
        )
    return table
