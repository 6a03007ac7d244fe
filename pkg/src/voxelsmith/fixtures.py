"""Procedural house fixtures standing in for an external house corpus."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

from .world import BlockType, Cell, Coord, SegmentLabel, VoxelGrid, bounding_box, save_house

CATALOG_VERSION = 1


def study_mini_dir() -> Path:
    """Location of the bundled study_mini transcript fixture."""
    return Path(str(files("voxelsmith").joinpath("data", "study_mini")))


def box_house() -> VoxelGrid:
    """5x3x5 box with a one-cell hollow at its center.

    Layers: y=0 full 5x5 foundation (25), y=1 walls minus the center cavity
    (24), y=2 full 5x5 roof (25); 74 cells total.
    """
    cells: dict[Coord, Cell] = {}
    for x in range(5):
        for z in range(5):
            cells[Coord(x, 0, z)] = Cell(BlockType.STONE, SegmentLabel.FOUNDATION)
            if (x, z) != (2, 2):
                cells[Coord(x, 1, z)] = Cell(BlockType.BRICK, SegmentLabel.WALL)
            cells[Coord(x, 2, z)] = Cell(BlockType.PLANK, SegmentLabel.ROOF)
    return VoxelGrid(cells)


def procedural_house(seed: int, origin: Coord = Coord(0, 0, 0)) -> VoxelGrid:
    """Parameterized box house: foundation, perimeter walls with windows and
    a door, flat roof. Deterministic for a given seed."""
    rng = random.Random(seed)
    width = rng.randint(5, 9)
    depth = rng.randint(5, 9)
    wall_h = rng.randint(2, 4)
    ox, oy, oz = origin

    cells: dict[Coord, Cell] = {}
    for x in range(width):
        for z in range(depth):
            cells[Coord(ox + x, oy, oz + z)] = Cell(BlockType.STONE, SegmentLabel.FOUNDATION)
            cells[Coord(ox + x, oy + wall_h + 1, oz + z)] = Cell(BlockType.PLANK, SegmentLabel.ROOF)

    perimeter = [
        (x, z)
        for x in range(width)
        for z in range(depth)
        if x in (0, width - 1) or z in (0, depth - 1)
    ]
    for x, z in perimeter:
        for dy in range(1, wall_h + 1):
            cells[Coord(ox + x, oy + dy, oz + z)] = Cell(BlockType.BRICK, SegmentLabel.WALL)

    # One door on the front edge (z = 0), two cells tall.
    door_x = rng.randint(1, width - 2)
    cells[Coord(ox + door_x, oy + 1, oz)] = Cell(BlockType.PLANK, SegmentLabel.DOOR)
    if wall_h >= 2:
        cells[Coord(ox + door_x, oy + 2, oz)] = Cell(BlockType.PLANK, SegmentLabel.DOOR)

    # A few windows punched into side walls at eye level.
    if wall_h >= 2:
        for _ in range(rng.randint(1, 3)):
            z = rng.randint(1, depth - 2)
            side = rng.choice((0, width - 1))
            cells[Coord(ox + side, oy + 2, oz + z)] = Cell(BlockType.GLASS, SegmentLabel.WINDOW)
    return VoxelGrid(cells)


@dataclass(frozen=True)
class HouseEntry:
    house_id: str
    path: str
    dims: tuple[int, int, int]


def grid_dims(grid: VoxelGrid) -> tuple[int, int, int]:
    lo, hi = bounding_box(grid)
    return (hi.x - lo.x + 1, hi.y - lo.y + 1, hi.z - lo.z + 1)


def write_fixture_corpus(out_dir: Path, count: int, seed: int,
                         include_box_house: bool = True) -> list[HouseEntry]:
    """Write `count` procedural houses plus a catalog.json into `out_dir`."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries: list[HouseEntry] = []

    def _write(house_id: str, grid: VoxelGrid) -> None:
        path = out_dir / f"{house_id}.json"
        path.write_text(save_house(grid), encoding="utf-8")
        entries.append(HouseEntry(house_id, path.name, grid_dims(grid)))

    if include_box_house:
        _write("box_house", box_house())
    for i in range(count):
        _write(f"house_{seed:04d}_{i:03d}", procedural_house(seed * 10_000 + i))

    catalog = {
        "v": CATALOG_VERSION,
        "houses": [
            {"house_id": e.house_id, "path": e.path, "dims": list(e.dims)} for e in entries
        ],
    }
    (out_dir / "catalog.json").write_text(json.dumps(catalog, indent=2), encoding="utf-8")
    return entries


def read_catalog(houses_dir: Path) -> list[HouseEntry]:
    """Load catalog.json if present, else derive one from the *.json houses."""
    houses_dir = Path(houses_dir)
    catalog_path = houses_dir / "catalog.json"
    if catalog_path.exists():
        doc = json.loads(catalog_path.read_text(encoding="utf-8"))
        if doc.get("v") != CATALOG_VERSION:
            raise ValueError(f"unsupported catalog version: {doc.get('v')!r}")
        return [
            HouseEntry(h["house_id"], h["path"], tuple(h["dims"]))  # type: ignore[arg-type]
            for h in doc["houses"]
        ]
    from .world import load_house

    entries = []
    for path in sorted(houses_dir.glob("*.json")):
        grid = load_house(path.read_text(encoding="utf-8"))
        entries.append(HouseEntry(path.stem, path.name, grid_dims(grid)))
    return entries


def filter_houses(catalog: list[HouseEntry],
                  min_dims: tuple[int, int, int],
                  max_dims: tuple[int, int, int]) -> list[HouseEntry]:
    """Keep houses whose bounding-box extents fall inside the given range."""
    if any(a > b for a, b in zip(min_dims, max_dims)):
        raise ValueError(f"inverted dimension range: min {min_dims} > max {max_dims}")
    return [
        e for e in catalog
        if all(lo <= d <= hi for d, lo, hi in zip(e.dims, min_dims, max_dims))
    ]
