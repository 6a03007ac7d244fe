"""Sparse labeled voxel world: schematic I/O, raycasting, segmentation.

Grids are immutable values; every mutating operation returns a new grid.
Coordinates are lattice cells with y vertical (up-positive), all components
in [0, WORLD_SIDE).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional

from .errors import EmptyGridError, OccupiedError, OutOfBoundsError, SchematicError

WORLD_SIDE = 256

PALETTE_VERSION = 1


class Coord(NamedTuple):
    """Integer lattice cell. Bounds are enforced where cells are stored."""

    x: int
    y: int
    z: int

    def offset(self, dx: int, dy: int, dz: int) -> "Coord":
        return Coord(self.x + dx, self.y + dy, self.z + dz)

    def add(self, other: "Coord") -> "Coord":
        return Coord(self.x + other.x, self.y + other.y, self.z + other.z)

    def yxz(self) -> tuple[int, int, int]:
        """Sort key used throughout: vertical layer first."""
        return (self.y, self.x, self.z)


def in_bounds(c: Coord) -> bool:
    return 0 <= c.x < WORLD_SIDE and 0 <= c.y < WORLD_SIDE and 0 <= c.z < WORLD_SIDE


class BlockType(IntEnum):
    """Closed block palette. Id 0 is air and is never stored in a grid."""

    AIR = 0
    STONE = 1
    DIRT = 2
    PLANK = 3
    BRICK = 4
    GLASS = 5
    BED = 6
    FENCE_POST = 7
    TORCH = 8
    LADDER = 9
    GRASS = 10

    @property
    def tag(self) -> str:
        return self.name.lower().replace("_", "-")


class SegmentLabel(str, Enum):
    """The 26 semantic part labels a block may carry."""

    BALCONY = "balcony"
    BED = "bed"
    BOOKCASE = "bookcase"
    CEILING = "ceiling"
    COLUMN = "column"
    DECK = "deck"
    DOOR = "door"
    FENCE = "fence"
    FLOOR = "floor"
    FOUNDATION = "foundation"
    GARDEN = "garden"
    GRASS = "grass"
    GROUND = "ground"
    LADDER = "ladder"
    LIGHTS = "lights"
    PATIO = "patio"
    PILLAR = "pillar"
    PORCH = "porch"
    RAILING = "railing"
    ROOF = "roof"
    STAIR = "stair"
    TORCH = "torch"
    WALKWAY = "walkway"
    WALL = "wall"
    WINDOW = "window"
    YARD = "yard"

    @classmethod
    def parse(cls, text: str) -> "SegmentLabel":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown segment label: {text!r}") from None


class Cell(NamedTuple):
    type: BlockType
    label: Optional[SegmentLabel]


# 26-connectivity: all Chebyshev-1 neighbors.
NEIGHBORS_26 = tuple(
    (dx, dy, dz)
    for dx in (-1, 0, 1)
    for dy in (-1, 0, 1)
    for dz in (-1, 0, 1)
    if (dx, dy, dz) != (0, 0, 0)
)

NEIGHBORS_6 = ((-1, 0, 0), (1, 0, 0), (0, 0, -1), (0, 0, 1), (0, 1, 0), (0, -1, 0))


def neighbors_26(c: Coord) -> Iterator[Coord]:
    for dx, dy, dz in NEIGHBORS_26:
        yield Coord(c.x + dx, c.y + dy, c.z + dz)


class VoxelGrid:
    """Immutable sparse block map. Equality is cell-map equality."""

    __slots__ = ("_cells",)

    def __init__(self, cells: Mapping[Coord, Cell] | None = None):
        staged: dict[Coord, Cell] = {}
        for coord, cell in (cells or {}).items():
            coord = Coord(*coord)
            if not in_bounds(coord):
                raise OutOfBoundsError(f"coordinate out of bounds: {coord}")
            if cell.type == BlockType.AIR:
                raise ValueError("air cells are never stored")
            staged[coord] = cell
        self._cells = staged

    @classmethod
    def _trusted(cls, cells: dict[Coord, Cell]) -> "VoxelGrid":
        grid = cls.__new__(cls)
        grid._cells = cells
        return grid

    @property
    def cells(self) -> Mapping[Coord, Cell]:
        return MappingProxyType(self._cells)

    def __len__(self) -> int:
        return len(self._cells)

    def __contains__(self, coord: Coord) -> bool:
        return coord in self._cells

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VoxelGrid):
            return NotImplemented
        return self._cells == other._cells

    def __repr__(self) -> str:
        return f"VoxelGrid({len(self._cells)} cells)"

    def get(self, coord: Coord) -> Optional[Cell]:
        return self._cells.get(coord)

    def coords(self) -> Iterable[Coord]:
        return self._cells.keys()

    def occupied_set(self) -> set[Coord]:
        return set(self._cells)

    def place(self, coord: Coord, type: BlockType, label: Optional[SegmentLabel]) -> "VoxelGrid":
        coord = Coord(*coord)
        if not in_bounds(coord):
            raise OutOfBoundsError(f"coordinate out of bounds: {coord}")
        if type == BlockType.AIR:
            raise ValueError("cannot place air")
        if coord in self._cells:
            raise OccupiedError(f"cell already occupied: {coord}")
        cells = dict(self._cells)
        cells[coord] = Cell(type, label)
        return VoxelGrid._trusted(cells)

    def remove_many(self, coords: Iterable[Coord]) -> "VoxelGrid":
        doomed = set(coords) & self._cells.keys()
        if not doomed:
            return self
        cells = {c: v for c, v in self._cells.items() if c not in doomed}
        return VoxelGrid._trusted(cells)

    def with_cells(self, extra: Mapping[Coord, Cell]) -> "VoxelGrid":
        """Bulk placement used by generation; callers guarantee no overlap."""
        cells = dict(self._cells)
        cells.update(extra)
        return VoxelGrid._trusted(cells)


@dataclass(frozen=True)
class SegmentInstance:
    """Maximal 26-connected component of same-label cells."""

    label: SegmentLabel
    voxels: frozenset[Coord]

    def min_voxel(self) -> Coord:
        return min(self.voxels, key=Coord.yxz)

    def bounding_box(self) -> tuple[Coord, Coord]:
        xs = [v.x for v in self.voxels]
        ys = [v.y for v in self.voxels]
        zs = [v.z for v in self.voxels]
        return Coord(min(xs), min(ys), min(zs)), Coord(max(xs), max(ys), max(zs))


@dataclass(frozen=True)
class Ray:
    """World-units ray; direction must be unit length within 1e-9."""

    origin: tuple[float, float, float]
    direction: tuple[float, float, float]

    def __post_init__(self) -> None:
        norm = math.sqrt(sum(d * d for d in self.direction))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"ray direction must be unit length, |d|={norm}")

    @classmethod
    def toward(cls, origin: tuple[float, float, float], target: tuple[float, float, float]) -> "Ray":
        d = tuple(t - o for o, t in zip(origin, target))
        norm = math.sqrt(sum(x * x for x in d))
        if norm == 0.0:
            raise ValueError("ray target coincides with origin")
        return cls(origin, tuple(x / norm for x in d))


# ---------------------------------------------------------------------------
# Schematic document I/O
# ---------------------------------------------------------------------------

def load_house(document: str | bytes) -> VoxelGrid:
    """Parse a schematic document into a grid.

    Document shape: {"palette_version": 1, "blocks": [{x, y, z, t, label}]}.
    """
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SchematicError(f"document is not UTF-8: {e}") from e
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise SchematicError(f"document is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise SchematicError("top-level value must be an object")
    if doc.get("palette_version") != PALETTE_VERSION:
        raise SchematicError(f"unsupported palette_version: {doc.get('palette_version')!r}")
    blocks = doc.get("blocks")
    if not isinstance(blocks, list):
        raise SchematicError("missing or non-array 'blocks' field")

    cells: dict[Coord, Cell] = {}
    for i, entry in enumerate(blocks):
        if not isinstance(entry, dict):
            raise SchematicError(f"blocks[{i}] is not an object")
        try:
            coord = Coord(int(entry["x"]), int(entry["y"]), int(entry["z"]))
            type_id = int(entry["t"])
        except (KeyError, TypeError, ValueError) as e:
            raise SchematicError(f"blocks[{i}] malformed: {e}") from e
        if not in_bounds(coord):
            raise SchematicError(f"blocks[{i}] out of bounds: {coord}")
        try:
            block = BlockType(type_id)
        except ValueError:
            raise SchematicError(f"blocks[{i}] unknown block id: {type_id}") from None
        if block == BlockType.AIR:
            raise SchematicError(f"blocks[{i}] stores air (id 0)")
        raw_label = entry.get("label")
        if raw_label is None:
            label = None
        else:
            try:
                label = SegmentLabel.parse(str(raw_label))
            except ValueError as e:
                raise SchematicError(f"blocks[{i}]: {e}") from e
        if coord in cells:
            raise SchematicError(f"duplicate coordinate: {coord}")
        cells[coord] = Cell(block, label)
    return VoxelGrid._trusted(cells)


def save_house(grid: VoxelGrid) -> str:
    """Serialize a grid; blocks ordered ascending (y, x, z)."""
    blocks = [
        {
            "x": c.x,
            "y": c.y,
            "z": c.z,
            "t": int(cell.type),
            "label": cell.label.value if cell.label else None,
        }
        for c, cell in sorted(grid.cells.items(), key=lambda kv: kv[0].yxz())
    ]
    return json.dumps({"palette_version": PALETTE_VERSION, "blocks": blocks})


# ---------------------------------------------------------------------------
# Block-level operations
# ---------------------------------------------------------------------------

def place_block(grid: VoxelGrid, coord: Coord, type: BlockType,
                label: Optional[SegmentLabel] = None) -> VoxelGrid:
    return grid.place(coord, type, label)


def remove_blocks(grid: VoxelGrid, coords: Iterable[Coord]) -> VoxelGrid:
    return grid.remove_many(coords)


def bounding_box(grid: VoxelGrid) -> tuple[Coord, Coord]:
    if len(grid) == 0:
        raise EmptyGridError("bounding_box of empty grid")
    min_x = min_y = min_z = WORLD_SIDE
    max_x = max_y = max_z = -1
    for c in grid.coords():
        min_x = min(min_x, c.x); max_x = max(max_x, c.x)
        min_y = min(min_y, c.y); max_y = max(max_y, c.y)
        min_z = min(min_z, c.z); max_z = max(max_z, c.z)
    return Coord(min_x, min_y, min_z), Coord(max_x, max_y, max_z)


# ---------------------------------------------------------------------------
# Raycasting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RayHit:
    coord: Coord
    prev: Optional[Coord]  # empty cell the ray crossed just before the hit


def _march(ray: Ray, t_limit: float) -> Iterator[Coord]:
    """Amanatides-Woo grid traversal: every cell the ray passes, in order."""
    ox, oy, oz = ray.origin
    dx, dy, dz = ray.direction
    cx, cy, cz = math.floor(ox), math.floor(oy), math.floor(oz)

    step_x = 1 if dx > 0 else (-1 if dx < 0 else 0)
    step_y = 1 if dy > 0 else (-1 if dy < 0 else 0)
    step_z = 1 if dz > 0 else (-1 if dz < 0 else 0)

    def axis_setup(o: float, d: float, c: int, step: int) -> tuple[float, float]:
        if step == 0:
            return math.inf, math.inf
        boundary = c + 1 if step > 0 else c
        return (boundary - o) / d, abs(1.0 / d)

    t_max_x, t_delta_x = axis_setup(ox, dx, cx, step_x)
    t_max_y, t_delta_y = axis_setup(oy, dy, cy, step_y)
    t_max_z, t_delta_z = axis_setup(oz, dz, cz, step_z)

    t = 0.0
    while t <= t_limit:
        yield Coord(cx, cy, cz)
        if t_max_x <= t_max_y and t_max_x <= t_max_z:
            t = t_max_x
            cx += step_x
            t_max_x += t_delta_x
        elif t_max_y <= t_max_z:
            t = t_max_y
            cy += step_y
            t_max_y += t_delta_y
        else:
            t = t_max_z
            cz += step_z
            t_max_z += t_delta_z


def _ray_box_exit_t(ray: Ray, lo: Coord, hi: Coord) -> Optional[float]:
    """Largest t at which the ray is still inside the cell-aligned box, or None."""
    t_enter, t_exit = 0.0, math.inf
    for o, d, lo_f, hi_f in zip(ray.origin, ray.direction,
                                (lo.x, lo.y, lo.z), (hi.x + 1, hi.y + 1, hi.z + 1)):
        if d == 0:
            if not (lo_f <= o <= hi_f):
                return None
            continue
        t0, t1 = (lo_f - o) / d, (hi_f - o) / d
        if t0 > t1:
            t0, t1 = t1, t0
        t_enter, t_exit = max(t_enter, t0), min(t_exit, t1)
    if t_exit < t_enter:
        return None
    return t_exit


def raycast_hit(grid: VoxelGrid, ray: Ray) -> Optional[RayHit]:
    """First occupied cell along the ray, with the cell crossed just before it."""
    if len(grid) == 0:
        return None
    origin_cell = Coord(*(math.floor(v) for v in ray.origin))
    if origin_cell in grid:
        return RayHit(origin_cell, None)
    lo, hi = bounding_box(grid)
    t_limit = _ray_box_exit_t(ray, lo, hi)
    if t_limit is None:
        return None
    prev: Optional[Coord] = None
    for cell in _march(ray, t_limit + 1e-9):
        if cell in grid:
            return RayHit(cell, prev)
        prev = cell
    return None


def raycast(grid: VoxelGrid, ray: Ray) -> Optional[Coord]:
    hit = raycast_hit(grid, ray)
    return hit.coord if hit else None


# ---------------------------------------------------------------------------
# Segmentation
# ---------------------------------------------------------------------------

_TYPE_FALLBACK = {
    BlockType.GLASS: SegmentLabel.WINDOW,
    BlockType.BED: SegmentLabel.BED,
    BlockType.TORCH: SegmentLabel.TORCH,
    BlockType.LADDER: SegmentLabel.LADDER,
    BlockType.FENCE_POST: SegmentLabel.FENCE,
    BlockType.GRASS: SegmentLabel.GRASS,
}


def _components(coords: set[Coord]) -> list[set[Coord]]:
    """26-connected components of a coord set."""
    seen: set[Coord] = set()
    out: list[set[Coord]] = []
    for start in coords:
        if start in seen:
            continue
        comp = {start}
        frontier = [start]
        seen.add(start)
        while frontier:
            cur = frontier.pop()
            for nb in neighbors_26(cur):
                if nb in coords and nb not in seen:
                    seen.add(nb)
                    comp.add(nb)
                    frontier.append(nb)
        out.append(comp)
    return out


def effective_labels(grid: VoxelGrid) -> dict[Coord, SegmentLabel]:
    """Stored labels plus the fallback assignment for unlabeled cells.

    Fallback: block-type rules first; remaining unlabeled cells are grouped
    into 26-connected components and labeled roof (component top layer),
    foundation (layer resting on y=0), else wall — first rule wins.
    """
    labels: dict[Coord, SegmentLabel] = {}
    unruled: set[Coord] = set()
    for coord, cell in grid.cells.items():
        if cell.label is not None:
            labels[coord] = cell.label
        elif cell.type in _TYPE_FALLBACK:
            labels[coord] = _TYPE_FALLBACK[cell.type]
        else:
            unruled.add(coord)
    for comp in _components(unruled):
        top = max(c.y for c in comp)
        for coord in comp:
            if coord.y == top:
                labels[coord] = SegmentLabel.ROOF
            elif coord.y == 0:
                labels[coord] = SegmentLabel.FOUNDATION
            else:
                labels[coord] = SegmentLabel.WALL
    return labels


def segment(grid: VoxelGrid) -> list[SegmentInstance]:
    """Partition all cells into maximal same-label 26-connected instances."""
    labels = effective_labels(grid)
    by_label: dict[SegmentLabel, set[Coord]] = {}
    for coord, label in labels.items():
        by_label.setdefault(label, set()).add(coord)
    instances: list[SegmentInstance] = []
    for label, coords in by_label.items():
        for comp in _components(coords):
            instances.append(SegmentInstance(label, frozenset(comp)))
    instances.sort(key=lambda inst: (inst.label.value, inst.min_voxel().yxz()))
    return instances
