#!/usr/bin/env python3
"""Tour of the command grammar: what parses, what doesn't, and definitions.

Run:  python3 demos/02_grammar_tour.py
"""
from voxelsmith import Utterance, parse_core, parse_definition, tokenize

EXAMPLES = [
    "build a tiny window on top of the roof",
    "remove the roof",
    "build 12 blocks of wall",
    "build a fence next to the wall",
    "make me a place to sit down",     # unknown label -> unparsable
    "build a wall around the house",   # 'around' is not a location phrase
    "hello",
]

print("tokenize('Build a TINY window!') ->", tokenize("Build a TINY window!"))
print()
for raw in EXAMPLES:
    ast = parse_core(Utterance.from_raw(raw))
    print(f"{raw!r}\n    -> {ast}")
print()

# Unknown commands become teachable through the def: syntax.
definition = parse_definition(
    "def: make the house taller; remove the roof; build a huge wall; build a large roof"
)
print(f"definition head: {definition.head.raw!r}")
for b in definition.body:
    print(f"  step: {b.raw!r}")
