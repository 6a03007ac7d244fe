#!/usr/bin/env python3
"""Regenerate the bundled study_mini fixture (houses + session transcripts).

The transcript is designed so that, after the default {2,3} session filter
and definition flattening, exactly 16 classified exchanges remain:
10 core, 4 induced, 2 unparsable -> final induced fraction 4/16 = 0.25.

Run from the repo root:  python3 scripts/build_study_mini.py
"""
from __future__ import annotations

import shutil
import sys
from pathlib import Path

from voxelsmith.config import Config
from voxelsmith.fixtures import box_house, procedural_house
from voxelsmith.generation import ProceduralModel
from voxelsmith.metrics import naturalization_curve
from voxelsmith.naturalize import DefinitionStore, HashedEmbedder, seed_store
from voxelsmith.session import create_session, handle_utterance, save_log
from voxelsmith.world import Coord, Ray, save_house

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "voxelsmith" / "data" / "study_mini"

HOUSE_A_SEED = 7
HOUSE_A_ORIGIN = Coord(10, 0, 10)

BOX_DOWN = Ray((2.5, 30.0, 2.5), (0.0, -1.0, 0.0))
HOUSE_A_DOWN = Ray((14.5, 30.0, 14.5), (0.0, -1.0, 0.0))

# (session_index, house_id, [(utterance, cursor), ...])
SCRIPT = [
    (1, "box_house", [
        ("hello", None),
        ("build a wall", BOX_DOWN),
    ]),
    (2, "box_house", [
        ("hello", None),                                                        # excluded
        ("def: raise the house; remove the roof; build a huge wall; build a large roof",
         None),                                                                 # 3 core
        ("build a skylight", None),                                            # induced
        ("frobnicate the yard", None),                                         # unparsable
        ("build a tiny window on top of the roof", None),                      # core
        ("raise the house", BOX_DOWN),                                         # induced
        ("remove the roof", None),                                             # core
        ("destroy the garden", None),                                          # unparsable
    ]),
    (3, "house_a", [
        ("build a skylight", None),                                            # induced
        ("raise the house", HOUSE_A_DOWN),                                     # induced
        ("remove the roof", None),                                             # core
        ("build a large roof", HOUSE_A_DOWN),                                  # core
        ("build a fence next to the wall", None),                              # core
        ("build a torch on top of the roof", None),                            # core
        ("build a bed in front of the house", None),                           # core
    ]),
]


def main() -> int:
    if DATA_DIR.exists():
        shutil.rmtree(DATA_DIR)
    houses_dir = DATA_DIR / "houses"
    logs_dir = DATA_DIR / "logs"
    houses_dir.mkdir(parents=True)
    logs_dir.mkdir(parents=True)

    houses = {
        "box_house": box_house(),
        "house_a": procedural_house(HOUSE_A_SEED, origin=HOUSE_A_ORIGIN),
    }
    for house_id, grid in houses.items():
        (houses_dir / f"{house_id}.json").write_text(save_house(grid), encoding="utf-8")

    config = Config()
    store = seed_store(DefinitionStore(embedder=HashedEmbedder(dim=config.embed_dim),
                                       threshold=config.similarity_threshold))
    model = ProceduralModel()

    logs = []
    for n, (session_index, house_id, turns) in enumerate(SCRIPT):
        state = create_session(
            houses[house_id], store,
            house_id=house_id, session_index=session_index,
            model=model, config=config, session_id=f"study_mini_s{session_index}",
        )
        for raw, cursor in turns:
            reply, state = handle_utterance(state, raw, cursor)
            print(f"  s{session_index} {state.log.exchanges[-1].resolution.value:12s} {raw!r}"
                  f" -> {reply.text}")
        save_log(state.log, logs_dir / f"session_{n}_{session_index}.ndjson")
        logs.append(state.log)

    points = naturalization_curve(logs)
    final = points[-1]
    print(f"flattened exchanges: {final.exchange_index}")
    print(f"final fractions: core={final.frac_core} induced={final.frac_induced} "
          f"unparsable={final.frac_unparsable}")
    expected = (16, 10 / 16, 4 / 16, 2 / 16)
    actual = (final.exchange_index, final.frac_core, final.frac_induced, final.frac_unparsable)
    if actual != expected:
        print(f"ERROR: transcript drifted from the designed counts {expected}", file=sys.stderr)
        return 1
    print(f"study_mini written to {DATA_DIR}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
