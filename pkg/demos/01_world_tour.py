#!/usr/bin/env python3
"""Tour of the voxel world: loading, editing, raycasting, segmentation.

Run:  python3 demos/01_world_tour.py
"""
from voxelsmith import (
    BlockType,
    Coord,
    Ray,
    SegmentLabel,
    bounding_box,
    load_house,
    place_block,
    raycast,
    remove_blocks,
    save_house,
    segment,
)
from voxelsmith.fixtures import box_house

# The standard test fixture: a 5x3x5 box house (74 cells).
house = box_house()
print(f"box_house: {len(house)} cells, bounding box {bounding_box(house)}")

# Grids are immutable values; edits return new grids.
taller = place_block(house, Coord(0, 3, 0), BlockType.TORCH, SegmentLabel.TORCH)
print(f"after placing a torch: {len(taller)} cells (original still {len(house)})")

# Schematic round trip: text in, text out, same cells.
doc = save_house(taller)
print(f"schematic document is {len(doc)} bytes; round trips: {load_house(doc) == taller}")

# Raycast: march from a camera toward the house, get the first block hit.
ray = Ray.toward((2.5, 20.0, 2.5), (2.5, 0.0, 2.5))
print(f"looking straight down at the center hits {raycast(taller, ray)}")

# Segmentation groups same-label connected components.
for instance in segment(house):
    print(f"  {instance.label.value:12s} {len(instance.voxels):3d} voxels, "
          f"lowest at {instance.min_voxel()}")

# Destroy targeting works through segmentation: remove the roof instance.
roof = next(i for i in segment(house) if i.label == SegmentLabel.ROOF)
print(f"removing the roof leaves {len(remove_blocks(house, roof.voxels))} cells")
