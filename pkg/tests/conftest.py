from __future__ import annotations

import random

import pytest


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when == "call" and "test_acceptance" in report.nodeid:
        status = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"\n[ACCEPTANCE] {status} {name}")

from voxelsmith.fixtures import box_house
from voxelsmith.generation import ProceduralModel
from voxelsmith.naturalize import DefinitionStore, HashedEmbedder, seed_store
from voxelsmith.session import create_session
from voxelsmith.world import BlockType, Cell, Coord, SegmentLabel, VoxelGrid


@pytest.fixture
def box() -> VoxelGrid:
    return box_house()


@pytest.fixture
def embedder() -> HashedEmbedder:
    return HashedEmbedder()


@pytest.fixture
def empty_store(embedder) -> DefinitionStore:
    return DefinitionStore(embedder=embedder)


@pytest.fixture
def seeded_store(embedder) -> DefinitionStore:
    return seed_store(DefinitionStore(embedder=embedder))


@pytest.fixture
def model() -> ProceduralModel:
    return ProceduralModel()


@pytest.fixture
def session(box, seeded_store, model):
    return create_session(box, seeded_store, house_id="box_house", session_index=2, model=model)


def random_grid(rng: random.Random, side: int = 8, fill: float = 0.2,
                labeled: bool = True) -> VoxelGrid:
    """Small random grid for property checks."""
    cells: dict[Coord, Cell] = {}
    labels = list(SegmentLabel)
    types = [b for b in BlockType if b != BlockType.AIR]
    for x in range(side):
        for y in range(side):
            for z in range(side):
                if rng.random() < fill:
                    label = rng.choice(labels) if labeled else None
                    cells[Coord(x, y, z)] = Cell(rng.choice(types), label)
    return VoxelGrid(cells)
