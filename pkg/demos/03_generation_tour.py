#!/usr/bin/env python3
"""Tour of constraint-steered generation: sizes, locations, prompts, models.

Run:  python3 demos/03_generation_tour.py
"""
from voxelsmith import (
    ConstraintSet,
    Coord,
    OffsetFrequencyModel,
    ProceduralModel,
    Prompt,
    BlockType,
    SegmentLabel,
    SizeWord,
    VoxelGrid,
    generate,
    resolve_length,
    resolve_location,
)
from voxelsmith.fixtures import box_house, procedural_house
from voxelsmith.grammar import RelLoc, Relation

print("size words map to block counts:",
      {w.value: resolve_length(w) for w in SizeWord})

# 'on top of the roof' resolves against the segmented scene.
house = box_house()
loc = resolve_location(house, RelLoc(Relation.ON_TOP_OF, SegmentLabel.ROOF))
print(f"'on top of the roof' resolves to {loc}")

# The skylight: a tiny window steered onto the roof becomes 2 glass blocks.
result = generate(house, SegmentLabel.WINDOW, ConstraintSet(loc, resolve_length(SizeWord.TINY)),
                  ProceduralModel())
print(f"tiny window on the roof -> {[tuple(s.coord) for s in result.steps]} "
      f"(types {[s.type.name for s in result.steps]})")

# The same generator, unconstrained sizes: a huge wall is a 10x10 plane.
wall = generate(VoxelGrid(), SegmentLabel.WALL, ConstraintSet(Coord(50, 0, 50), 100),
                ProceduralModel())
print(f"huge wall placed {len(wall.steps)} blocks, "
      f"spanning x {min(s.coord.x for s in wall.steps)}..{max(s.coord.x for s in wall.steps)}, "
      f"y 0..{max(s.coord.y for s in wall.steps)}")

# Prompts seed the generation with user-placed structure.
prompt = Prompt(((Coord(0, 0, 0), BlockType.STONE), (Coord(1, 0, 0), BlockType.STONE)))
patio = generate(VoxelGrid(), SegmentLabel.PATIO, ConstraintSet(Coord(8, 0, 8), 6, prompt),
                 ProceduralModel())
print(f"patio with a 2-block prompt: prompt={len(patio.prompt_steps)} steps={len(patio.steps)}")

# The statistical model learns placement offsets from a labeled corpus.
corpus = [procedural_house(i) for i in range(6)]
learned = OffsetFrequencyModel.fit(corpus)
column = generate(VoxelGrid(), SegmentLabel.WALL, ConstraintSet(Coord(5, 0, 5), 6), learned)
print(f"corpus-fitted wall: {[tuple(s.coord) for s in column.steps]}")
