from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from voxelsmith.errors import DefinitionSyntaxError
from voxelsmith.grammar import (
    BuildCommand,
    Conversational,
    DestroyCommand,
    Relation,
    RelLoc,
    SizeWord,
    Unparsable,
    Utterance,
    format_definition,
    is_definition,
    parse_core,
    parse_definition,
    tokenize,
    word_count,
)
from voxelsmith.world import SegmentLabel


def parse(raw: str):
    return parse_core(Utterance.from_raw(raw))


class TestTokenize:
    def test_case_and_punctuation(self):
        assert tokenize("Build a TINY window!") == ("build", "a", "tiny", "window")

    def test_empty(self):
        assert tokenize("") == ()
        assert tokenize("   \t ") == ()

    def test_seven_tokens(self):
        assert len(tokenize("build a tiny window on the roof")) == 7

    def test_apostrophe_survives(self):
        assert tokenize("don't stop") == ("don't", "stop")

    @given(st.text(max_size=60))
    def test_deterministic_and_lowercase(self, raw):
        a, b = tokenize(raw), tokenize(raw)
        assert a == b
        assert all(t == t.lower() and t for t in a)


class TestWordCount:
    @pytest.mark.parametrize(
        "raw,count",
        [
            ("build a skylight", 3),
            ("build a tiny window on the roof", 7),
            ("build an awning on house", 5),
            ("build a roof", 3),
        ],
    )
    def test_reference_counts(self, raw, count):
        assert word_count(raw) == count


class TestParseCore:
    def test_build_with_size_and_location(self):
        assert parse("build a tiny window on top of the roof") == BuildCommand(
            SegmentLabel.WINDOW,
            SizeWord.TINY,
            None,
            RelLoc(Relation.ON_TOP_OF, SegmentLabel.ROOF),
        )

    def test_destroy(self):
        assert parse("remove the roof") == DestroyCommand(SegmentLabel.ROOF)

    def test_unknown_verb(self):
        ast = parse("frobnicate the yard")
        assert isinstance(ast, Unparsable)
        assert "unknown verb" in ast.reason

    def test_unknown_label(self):
        ast = parse("build a gazebo")
        assert isinstance(ast, Unparsable)
        assert "unknown label" in ast.reason

    def test_bad_location_phrase(self):
        ast = parse("build a wall around the house")
        assert isinstance(ast, Unparsable)
        assert "bad location phrase" in ast.reason

    def test_default_size(self):
        assert parse("build a wall") == BuildCommand(SegmentLabel.WALL)

    def test_all_size_words(self):
        for word, size in [("tiny", SizeWord.TINY), ("small", SizeWord.SMALL),
                           ("large", SizeWord.LARGE), ("huge", SizeWord.HUGE)]:
            ast = parse(f"build a {word} wall")
            assert ast == BuildCommand(SegmentLabel.WALL, size)

    def test_explicit_block_count(self):
        ast = parse("build 12 blocks of wall")
        assert ast == BuildCommand(SegmentLabel.WALL, SizeWord.DEFAULT, 12, None)

    def test_bare_count(self):
        assert parse("build 7 walls") == BuildCommand(SegmentLabel.WALL, SizeWord.DEFAULT, 7, None)

    def test_location_on_maps_to_on_top_of(self):
        ast = parse("build a tiny window on the roof")
        assert ast.relloc == RelLoc(Relation.ON_TOP_OF, SegmentLabel.ROOF)

    def test_location_variants(self):
        cases = {
            "build a fence in front of the house": (Relation.IN_FRONT_OF, None),
            "build a fence behind the house": (Relation.BEHIND, None),
            "build a fence left of the wall": (Relation.LEFT_OF, SegmentLabel.WALL),
            "build a fence right of the wall": (Relation.RIGHT_OF, SegmentLabel.WALL),
            "build a fence next to the wall": (Relation.NEXT_TO, SegmentLabel.WALL),
            "build a fence above the door": (Relation.ON_TOP_OF, SegmentLabel.DOOR),
        }
        for raw, (relation, anchor) in cases.items():
            ast = parse(raw)
            assert ast.relloc == RelLoc(relation, anchor), raw

    def test_label_synonyms(self):
        assert parse("destroy the stairs") == DestroyCommand(SegmentLabel.STAIR)
        assert parse("remove the windows") == DestroyCommand(SegmentLabel.WINDOW)
        assert parse("add a light") == BuildCommand(SegmentLabel.LIGHTS)

    def test_conversational(self):
        assert parse("hello") == Conversational()
        assert parse("thanks a lot") == Conversational()
        assert parse("goodbye now") == Conversational()

    def test_filler_words_skipped(self):
        assert parse("build me a wall please") == BuildCommand(SegmentLabel.WALL)

    def test_destroy_rejects_location(self):
        ast = parse("remove the roof on the house")
        assert isinstance(ast, Unparsable)

    def test_empty_utterance(self):
        assert isinstance(parse("   "), Unparsable)

    @given(st.text(max_size=50))
    def test_total_and_deterministic(self, raw):
        assert parse(raw) == parse(raw)


class TestParseDefinition:
    def test_three_step_definition(self):
        ast = parse_definition(
            "def: make the house taller; remove the roof; build a huge wall; build a large roof"
        )
        assert ast.head.raw == "make the house taller"
        assert [b.raw for b in ast.body] == [
            "remove the roof",
            "build a huge wall",
            "build a large roof",
        ]

    def test_single_body(self):
        ast = parse_definition("def: build a skylight; build a tiny window on the roof")
        assert ast.head.raw == "build a skylight"
        assert len(ast.body) == 1

    def test_empty_body_rejected(self):
        with pytest.raises(DefinitionSyntaxError):
            parse_definition("def: build a skylight;")

    def test_no_body_rejected(self):
        with pytest.raises(DefinitionSyntaxError):
            parse_definition("def: build a skylight")

    def test_blank_segment_rejected(self):
        with pytest.raises(DefinitionSyntaxError):
            parse_definition("def: a; ; b")

    def test_prefix_case_and_whitespace(self):
        assert is_definition("  DEF: x; y ")
        ast = parse_definition("  Def:  x ; y ")
        assert ast.head.raw == "x"

    def test_not_a_definition(self):
        assert not is_definition("build a wall")
        with pytest.raises(DefinitionSyntaxError):
            parse_definition("build a wall")

    def test_round_trip(self):
        raw = "def: make the house taller; remove the roof; build a huge wall; build a large roof"
        ast = parse_definition(raw)
        assert parse_definition(format_definition(ast)) == ast


class TestAstInvariants:
    def test_every_build_size_is_resolvable(self):
        from voxelsmith.generation import resolve_length

        for raw in ["build a wall", "build a tiny roof", "build a huge fence", "build 3 walls"]:
            ast = parse(raw)
            assert isinstance(ast, BuildCommand)
            n = resolve_length(ast.length if ast.length is not None else ast.size)
            assert n >= 1
