from __future__ import annotations

import random

import pytest

from voxelsmith.errors import UnsupportedLabelError
from voxelsmith.fixtures import box_house, procedural_house
from voxelsmith.generation import (
    ConstraintSet,
    NeedsHint,
    OffsetFrequencyModel,
    ProceduralModel,
    Prompt,
    StopReason,
    cursor_location,
    fit_offset_model,
    generate,
    load_offset_params,
    resolve_length,
    resolve_location,
    save_offset_params,
)
from voxelsmith.grammar import Relation, RelLoc, SizeWord
from voxelsmith.world import (
    BlockType,
    Cell,
    Coord,
    Ray,
    SegmentLabel,
    VoxelGrid,
    place_block,
)


class TestResolveLength:
    @pytest.mark.parametrize(
        "size,blocks",
        [
            (SizeWord.TINY, 2),
            (SizeWord.SMALL, 5),
            (SizeWord.DEFAULT, 20),
            (SizeWord.LARGE, 50),
            (SizeWord.HUGE, 100),
        ],
    )
    def test_size_mapping(self, size, blocks):
        assert resolve_length(size) == blocks

    def test_explicit_passthrough(self):
        assert resolve_length(12) == 12

    def test_explicit_below_one(self):
        with pytest.raises(ValueError):
            resolve_length(0)


class TestResolveLocation:
    def test_on_top_of_roof_box_house(self):
        # roof top layer is y=2; ties break to lowest (x, z) -> above (0,2,0)
        loc = resolve_location(box_house(), RelLoc(Relation.ON_TOP_OF, SegmentLabel.ROOF))
        assert loc == Coord(0, 3, 0)

    def test_on_top_of_house_anchor(self):
        loc = resolve_location(box_house(), RelLoc(Relation.ON_TOP_OF, None))
        assert loc == Coord(0, 3, 0)

    def test_cursor_hit_face(self):
        grid = place_block(VoxelGrid(), Coord(3, 0, 0), BlockType.STONE, None)
        loc = resolve_location(grid, None, Ray((0.0, 0.5, 0.5), (1.0, 0.0, 0.0)))
        assert loc == Coord(2, 0, 0)

    def test_missing_anchor_needs_hint(self):
        hint = resolve_location(box_house(), RelLoc(Relation.ON_TOP_OF, SegmentLabel.GARDEN))
        assert isinstance(hint, NeedsHint)
        assert "garden" in hint.reason

    def test_nothing_given_needs_hint(self):
        assert isinstance(resolve_location(box_house(), None, None), NeedsHint)

    def test_cursor_miss_needs_hint(self):
        miss = Ray((50.0, 50.0, 50.0), (0.0, 1.0, 0.0))
        assert isinstance(resolve_location(box_house(), None, miss), NeedsHint)

    def test_on_top_of_occupied_above(self):
        grid = VoxelGrid({
            Coord(0, 0, 0): Cell(BlockType.PLANK, SegmentLabel.ROOF),
            Coord(0, 1, 0): Cell(BlockType.STONE, SegmentLabel.WALL),
        })
        hint = resolve_location(grid, RelLoc(Relation.ON_TOP_OF, SegmentLabel.ROOF))
        assert isinstance(hint, NeedsHint)

    def test_side_relations(self):
        slab = VoxelGrid({
            Coord(x, 0, z): Cell(BlockType.GRASS, SegmentLabel.GARDEN)
            for x in range(10, 13) for z in range(10, 13)
        })
        rel = lambda r: resolve_location(slab, RelLoc(r, SegmentLabel.GARDEN))
        assert rel(Relation.IN_FRONT_OF) == Coord(11, 0, 9)
        assert rel(Relation.BEHIND) == Coord(11, 0, 13)
        assert rel(Relation.LEFT_OF) == Coord(9, 0, 11)
        assert rel(Relation.RIGHT_OF) == Coord(13, 0, 11)

    def test_next_to(self):
        grid = VoxelGrid({Coord(10, 1, 10): Cell(BlockType.BRICK, SegmentLabel.WALL)})
        assert resolve_location(grid, RelLoc(Relation.NEXT_TO, SegmentLabel.WALL)) == Coord(9, 1, 10)


class TestProceduralGeneration:
    def test_skylight_two_glass_blocks(self):
        grid = box_house()
        result = generate(grid, SegmentLabel.WINDOW, ConstraintSet(Coord(0, 3, 0), 2), ProceduralModel())
        assert [s.coord for s in result.steps] == [Coord(0, 3, 0), Coord(0, 4, 0)]
        assert all(s.type == BlockType.GLASS for s in result.steps)
        assert result.stop is StopReason.COMPLETED
        assert all(result.grid.get(s.coord).label == SegmentLabel.WINDOW for s in result.steps)

    def test_wall_five_blocks_hand_traced(self):
        # empty world, seed (2,0,2): height ceil(sqrt(5)) = 3, plane spans +x
        result = generate(VoxelGrid(), SegmentLabel.WALL, ConstraintSet(Coord(2, 0, 2), 5), ProceduralModel())
        assert [s.coord for s in result.steps] == [
            Coord(2, 0, 2),
            Coord(2, 1, 2),
            Coord(2, 2, 2),
            Coord(3, 0, 2),
            Coord(3, 1, 2),
        ]
        assert result.stop is StopReason.COMPLETED

    def test_roof_plane_scan_order(self):
        # 16 blocks fill a 4x4 plane ascending (x, z) from the seed
        result = generate(VoxelGrid(), SegmentLabel.ROOF, ConstraintSet(Coord(1, 0, 1), 16), ProceduralModel())
        expected = [Coord(1 + dx, 0, 1 + dz) for dx in range(4) for dz in range(4)]
        assert [s.coord for s in result.steps] == expected

    def test_fence_clockwise_around_footprint(self):
        slab = VoxelGrid({
            Coord(x, 0, z): Cell(BlockType.STONE, SegmentLabel.WALL)
            for x in range(2, 5) for z in range(2, 5)
        })
        result = generate(slab, SegmentLabel.FENCE, ConstraintSet(Coord(1, 0, 2), 5), ProceduralModel())
        # ring wraps the 3x3 footprint; clockwise from the cell nearest the seed
        assert [s.coord for s in result.steps] == [
            Coord(1, 0, 2),
            Coord(1, 0, 1),
            Coord(2, 0, 1),
            Coord(3, 0, 1),
            Coord(4, 0, 1),
        ]

    def test_rooftop_ring_sits_on_footprint(self):
        grid = box_house()
        result = generate(grid, SegmentLabel.RAILING, ConstraintSet(Coord(0, 3, 0), 16), ProceduralModel())
        assert len(result.steps) == 16
        for s in result.steps:
            assert s.coord.y == 3
            assert 0 <= s.coord.x <= 4 and 0 <= s.coord.z <= 4

    def test_door_is_vertical_pair(self):
        result = generate(VoxelGrid(), SegmentLabel.DOOR, ConstraintSet(Coord(5, 0, 5), 20), ProceduralModel())
        assert [s.coord for s in result.steps] == [Coord(5, 0, 5), Coord(5, 1, 5)]
        assert result.stop is StopReason.EXHAUSTED

    def test_stair_climbs_diagonally(self):
        result = generate(VoxelGrid(), SegmentLabel.STAIR, ConstraintSet(Coord(5, 0, 5), 4), ProceduralModel())
        assert [s.coord for s in result.steps] == [
            Coord(5, 0, 5), Coord(6, 1, 5), Coord(7, 2, 5), Coord(8, 3, 5),
        ]

    def test_blocked_location_zero_steps(self):
        cube = VoxelGrid({
            Coord(x, y, z): Cell(BlockType.STONE, SegmentLabel.WALL)
            for x in range(3) for y in range(3) for z in range(3)
        })
        result = generate(cube, SegmentLabel.WALL, ConstraintSet(Coord(1, 1, 1), 5), ProceduralModel())
        assert result.steps == ()
        assert result.stop is StopReason.BLOCKED

    def test_bed_override(self):
        result = generate(box_house(), SegmentLabel.BED, ConstraintSet(Coord(2, 3, 2), 4), ProceduralModel())
        assert result.steps and all(s.type == BlockType.BED for s in result.steps)

    def test_torch_hugs_structure(self):
        grid = box_house()
        result = generate(grid, SegmentLabel.TORCH, ConstraintSet(Coord(0, 3, 0), 6), ProceduralModel())
        assert result.steps
        for s in result.steps:
            assert any(
                Coord(s.coord.x + dx, s.coord.y + dy, s.coord.z + dz) in grid
                for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)
            )


class TestOffsetFrequencyModel:
    def _column_corpus(self):
        grid = VoxelGrid({
            Coord(0, y, 0): Cell(BlockType.BRICK, SegmentLabel.WALL) for y in range(3)
        })
        return [grid]

    def test_vertical_column_learns_up_offset(self):
        table = fit_offset_model(self._column_corpus())
        offsets = table[SegmentLabel.WALL].data["offsets"]
        assert offsets[0][0] == (0, 1, 0)
        assert offsets[0][2] == 2  # two consecutive pairs observed

    def test_tie_breaks_to_lexicographically_smaller_offset(self):
        grid = VoxelGrid({
            Coord(0, 0, 0): Cell(BlockType.BRICK, SegmentLabel.WALL),
            Coord(1, 0, 0): Cell(BlockType.BRICK, SegmentLabel.WALL),
            Coord(0, 0, 5): Cell(BlockType.BRICK, SegmentLabel.WALL),
            Coord(0, 1, 5): Cell(BlockType.BRICK, SegmentLabel.WALL),
        })
        table = fit_offset_model([grid])
        offsets = table[SegmentLabel.WALL].data["offsets"]
        assert offsets[0][0] == (0, 1, 0)  # (0,1,0) < (1,0,0) at equal counts

    def test_unsupported_label(self):
        model = OffsetFrequencyModel(fit_offset_model(self._column_corpus()))
        with pytest.raises(UnsupportedLabelError):
            model.params_for(SegmentLabel.GARDEN)

    def test_empty_corpus(self):
        with pytest.raises(ValueError):
            fit_offset_model([])

    def test_unlabeled_corpus_rejected(self):
        grid = VoxelGrid({Coord(0, 0, 0): Cell(BlockType.STONE, None)})
        with pytest.raises(ValueError):
            fit_offset_model([grid])

    def test_generates_learned_column(self):
        model = OffsetFrequencyModel.fit(self._column_corpus())
        result = generate(VoxelGrid(), SegmentLabel.WALL, ConstraintSet(Coord(5, 0, 5), 3), model)
        assert [s.coord for s in result.steps] == [Coord(5, 0, 5), Coord(5, 1, 5), Coord(5, 2, 5)]
        assert all(s.type == BlockType.BRICK for s in result.steps)

    def test_params_round_trip(self):
        table = fit_offset_model(self._column_corpus())
        loaded = load_offset_params(save_offset_params(table))
        assert loaded[SegmentLabel.WALL].data["offsets"] == table[SegmentLabel.WALL].data["offsets"]
        assert loaded[SegmentLabel.WALL].data["default_block"] == table[SegmentLabel.WALL].data["default_block"]


class TestPrompt:
    def test_prompt_written_first_and_labeled(self):
        prompt = Prompt(((Coord(0, 0, 0), BlockType.STONE), (Coord(1, 0, 0), BlockType.STONE)))
        result = generate(
            VoxelGrid(), SegmentLabel.PATIO,
            ConstraintSet(Coord(5, 0, 5), 3, prompt), ProceduralModel(),
        )
        assert {s.coord for s in result.prompt_steps} == {Coord(5, 0, 5), Coord(6, 0, 5)}
        assert len(result.steps) == 3
        assert all(result.grid.get(s.coord).label == SegmentLabel.PATIO for s in result.prompt_steps)

    def test_prompt_collisions_skipped(self):
        grid = place_block(VoxelGrid(), Coord(5, 0, 5), BlockType.STONE, SegmentLabel.WALL)
        prompt = Prompt(((Coord(0, 0, 0), BlockType.STONE), (Coord(0, 1, 0), BlockType.STONE)))
        result = generate(grid, SegmentLabel.PATIO, ConstraintSet(Coord(5, 0, 5), 2, prompt), ProceduralModel())
        assert Coord(5, 0, 5) in result.skipped_prompt
        assert [s.coord for s in result.prompt_steps] == [Coord(5, 1, 5)]

    def test_disconnected_prompt_rejected(self):
        with pytest.raises(ValueError):
            Prompt(((Coord(10, 10, 10), BlockType.STONE),))

    def test_duplicate_offsets_rejected(self):
        with pytest.raises(ValueError):
            Prompt(((Coord(0, 0, 0), BlockType.STONE), (Coord(0, 0, 0), BlockType.DIRT)))

    def test_window_prompt_types_kept_but_steps_forced_glass(self):
        prompt = Prompt(((Coord(0, 0, 0), BlockType.STONE),))
        result = generate(
            box_house(), SegmentLabel.WINDOW,
            ConstraintSet(Coord(0, 3, 0), 2, prompt), ProceduralModel(),
        )
        assert all(s.type == BlockType.GLASS for s in result.steps)


def _connected_with(origin, coords: set[Coord]) -> bool:
    cluster = coords | {origin}
    seen = {origin}
    frontier = [origin]
    while frontier:
        cur = frontier.pop()
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for dz in (-1, 0, 1):
                    nb = Coord(cur.x + dx, cur.y + dy, cur.z + dz)
                    if nb in cluster and nb not in seen:
                        seen.add(nb)
                        frontier.append(nb)
    return seen == cluster


class TestGenerationInvariants:
    @pytest.mark.parametrize("model_name", ["procedural", "statistical"])
    def test_randomized_invariants(self, model_name):
        rng = random.Random(99)
        corpus = [procedural_house(i) for i in range(3)]
        model = ProceduralModel() if model_name == "procedural" else OffsetFrequencyModel.fit(corpus)
        labels = list(SegmentLabel)
        for case in range(40):
            house = procedural_house(rng.randrange(1000), origin=Coord(20, 0, 20))
            label = rng.choice(labels)
            length = rng.choice([2, 5, 20, rng.randint(1, 60)])
            ray = Ray.toward((24.5, 30.0, 24.5), (24.5, 0.0, 24.5))
            loc = cursor_location(house, ray)
            assert loc is not None
            try:
                model.params_for(label)
            except UnsupportedLabelError:
                continue
            result = generate(house, label, ConstraintSet(loc, length), model, seed=case)
            # count, overwrite, connectivity, override, determinism
            assert len(result.steps) <= length
            placed = [s.coord for s in result.steps]
            assert len(set(placed)) == len(placed)
            assert all(c not in house for c in placed)
            assert _connected_with(loc, set(placed))
            if label == SegmentLabel.WINDOW:
                assert all(s.type == BlockType.GLASS for s in result.steps)
            if label == SegmentLabel.BED:
                assert all(s.type == BlockType.BED for s in result.steps)
            again = generate(house, label, ConstraintSet(loc, length), model, seed=case)
            assert again.steps == result.steps

    def test_full_length_on_open_terrain(self):
        # when the model never returns None the step count equals the request
        for label in (SegmentLabel.WALL, SegmentLabel.ROOF, SegmentLabel.WINDOW, SegmentLabel.PATIO):
            result = generate(
                VoxelGrid(), label, ConstraintSet(Coord(50, 10, 50), 20), ProceduralModel()
            )
            assert len(result.steps) == 20, label


class TestGeneratorContextViews:
    def _context(self, grid, frontier):
        from voxelsmith.generation import GeneratorContext

        types = {c: int(cell.type) for c, cell in grid.cells.items()}
        return GeneratorContext(
            frontier=frontier,
            origin=frontier,
            history=(),
            placed=(),
            prompt_coords=frozenset(),
            cell_types=types,
            anchor=frozenset({frontier}),
            structure_cells=frozenset(types),
            structure_bbox=None,
            structure_count=len(types),
            target_length=5,
        )

    def test_patch_is_centered_block_type_cube(self):
        grid = place_block(VoxelGrid(), Coord(10, 10, 10), BlockType.GLASS, None)
        ctx = self._context(grid, Coord(10, 10, 10))
        patch = ctx.patch()
        assert patch.shape == (9, 9, 9)
        assert patch[4, 4, 4] == int(BlockType.GLASS)
        assert patch.sum() == int(BlockType.GLASS)  # nothing else nearby

    def test_global_occupancy_is_coarse(self):
        grid = place_block(VoxelGrid(), Coord(40, 3, 200), BlockType.STONE, None)
        ctx = self._context(grid, Coord(40, 3, 200))
        occ = ctx.global_occupancy()
        assert occ.shape == (16, 16, 16)
        assert occ[40 // 16, 3 // 16, 200 // 16]
        assert occ.sum() == 1

    def test_history_capped_at_three(self):
        result = generate(VoxelGrid(), SegmentLabel.ROOF,
                          ConstraintSet(Coord(5, 0, 5), 9), ProceduralModel())
        assert len(result.steps) == 9  # context invariant enforced inside generate
