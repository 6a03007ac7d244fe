#!/usr/bin/env python3
"""Tour of a full dialogue session and the metrics computed from its log.

Run:  python3 demos/05_session_and_metrics_tour.py
"""
from voxelsmith import (
    DefinitionStore,
    HashedEmbedder,
    Ray,
    create_session,
    expressiveness_curve,
    handle_utterance,
    naturalization_curve,
    provide_hint,
    seed_store,
)
from voxelsmith.fixtures import box_house

store = seed_store(DefinitionStore(embedder=HashedEmbedder()))
state = create_session(box_house(), store, house_id="box_house", session_index=2)

down = Ray((2.5, 30.0, 2.5), (0.0, -1.0, 0.0))
turns = [
    ("hello", None),
    ("build a skylight", None),
    ("def: clear the top; remove the roof", None),
    ("clear the top", None),
    ("paint it blue", None),
]
for raw, cursor in turns:
    reply, state = handle_utterance(state, raw, cursor)
    print(f"user : {raw}")
    print(f"agent: [{reply.resolution.value}] {reply.text}")

# A build without a location pends until the user supplies a cursor hint.
reply, state = handle_utterance(state, "build a garden")
print(f"user : build a garden\nagent: [{reply.resolution.value}] {reply.text}")
reply, state = provide_hint(state, down)
print(f"hint : (cursor straight down)\nagent: [{reply.resolution.value}] {reply.text}")

print("\nnaturalization curve (cumulative core/induced/unparsable):")
for p in naturalization_curve([state.log]):
    print(f"  #{p.exchange_index}: {p.frac_core:.2f} / {p.frac_induced:.2f} / "
          f"{p.frac_unparsable:.2f}")

print("expressiveness running mean:")
for i, mean in expressiveness_curve([state.log]):
    print(f"  #{i}: {mean:.3f}")
