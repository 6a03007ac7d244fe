#!/usr/bin/env python3
"""Tour of the definition store: teach, retrieve, expand, share.

Run:  python3 demos/04_naturalize_tour.py
"""
from voxelsmith import (
    DefinitionStore,
    HashedEmbedder,
    Utterance,
    cosine,
    define,
    embed,
    expand,
    lookup,
    seed_store,
)

U = Utterance.from_raw

store = seed_store(DefinitionStore(embedder=HashedEmbedder()))
print("seeded commands:", [e.head.raw for e in store.entries])

# Retrieval is cosine nearest neighbor over mean token embeddings.
entry, sim = lookup(store, U("build a skylight"))
print(f"lookup('build a skylight') -> {entry.head.raw!r} at similarity {sim:.6f}")
print("a token-disjoint query misses:", lookup(store, U("paint it blue")))

# Word order doesn't matter: averaging is permutation-invariant.
e = store.embedder
print("cos(embed('build a wall'), embed('wall a build')) =",
      cosine(embed(U("build a wall"), e), embed(U("wall a build"), e)))

# New definitions are retrievable immediately and can nest.
define(store, U("build a wall around the house"), [U("build a wall")] * 4)
define(store, U("fortify the house"),
       [U("build a wall around the house"), U("make the house taller")])
leaves = expand(store, U("fortify the house"))
print("expand('fortify the house') ->")
for leaf in leaves:
    print(f"  {leaf.raw}")
