"""Deterministic tokenizer and command grammar.

Grammar (authoritative, also in docs/command-language.md):

    command     := build_cmd | destroy_cmd
    build_cmd   := BUILD_VERB [ARTICLE] [SIZE | INT] LABEL [LOC_PHRASE]
    destroy_cmd := DESTROY_VERB [ARTICLE] LABEL
    LOC_PHRASE  := ("on top of" | "on" | "above" | "in front of" | "behind"
                    | "left of" | "right of" | "next to") [ARTICLE] (LABEL | "house")

Parsing is total: failures come back as the Unparsable variant, never as an
exception. Definitions use the separate `def: head; body; ...` shape.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .errors import DefinitionSyntaxError
from .world import SegmentLabel

# Tokens are lowercase fragments split on whitespace and punctuation;
# apostrophe is the one non-alphanumeric character that survives.
_TOKEN_SPLIT = re.compile(r"[^a-z0-9']+")


def tokenize(raw: str) -> tuple[str, ...]:
    return tuple(t for t in _TOKEN_SPLIT.split(raw.lower()) if t)


def word_count(raw: str) -> int:
    """Whitespace word count of the raw text (the metric unit)."""
    return len(raw.split())


@dataclass(frozen=True)
class Utterance:
    raw: str
    tokens: tuple[str, ...]

    @classmethod
    def from_raw(cls, raw: str) -> "Utterance":
        return cls(raw, tokenize(raw))

    def __str__(self) -> str:
        return self.raw


class SizeWord(str, Enum):
    TINY = "tiny"
    SMALL = "small"
    DEFAULT = "default"
    LARGE = "large"
    HUGE = "huge"


class Relation(str, Enum):
    ON_TOP_OF = "on_top_of"
    IN_FRONT_OF = "in_front_of"
    BEHIND = "behind"
    LEFT_OF = "left_of"
    RIGHT_OF = "right_of"
    NEXT_TO = "next_to"


@dataclass(frozen=True)
class RelLoc:
    """Relative location; anchor None means the whole house."""

    relation: Relation
    anchor: Optional[SegmentLabel]


@dataclass(frozen=True)
class BuildCommand:
    label: SegmentLabel
    size: SizeWord = SizeWord.DEFAULT
    length: Optional[int] = None  # explicit block count, overrides size
    relloc: Optional[RelLoc] = None


@dataclass(frozen=True)
class DestroyCommand:
    label: SegmentLabel


@dataclass(frozen=True)
class DefineCommand:
    head: Utterance
    body: tuple[Utterance, ...]


@dataclass(frozen=True)
class Conversational:
    pass


@dataclass(frozen=True)
class Unparsable:
    reason: str


CommandAst = Union[BuildCommand, DestroyCommand, DefineCommand, Conversational, Unparsable]

BUILD_VERBS = frozenset({"build", "make", "construct", "add"})
DESTROY_VERBS = frozenset({"destroy", "remove", "delete"})
CONVERSATIONAL_OPENERS = frozenset({"hello", "hi", "hey", "thanks", "thank", "bye", "goodbye"})

ARTICLES = frozenset({"a", "an", "the", "some"})
FILLERS = frozenset({"me", "please"})
_SKIP = ARTICLES | FILLERS

_SIZE_WORDS = {w.value: w for w in SizeWord}

LABEL_SYNONYMS = {
    "stairs": SegmentLabel.STAIR,
    "windows": SegmentLabel.WINDOW,
    "walls": SegmentLabel.WALL,
    "fences": SegmentLabel.FENCE,
    "doors": SegmentLabel.DOOR,
    "light": SegmentLabel.LIGHTS,
}

# Longest phrases first so "on top of" wins over "on".
_RELATION_PHRASES: tuple[tuple[tuple[str, ...], Relation], ...] = (
    (("on", "top", "of"), Relation.ON_TOP_OF),
    (("in", "front", "of"), Relation.IN_FRONT_OF),
    (("left", "of"), Relation.LEFT_OF),
    (("right", "of"), Relation.RIGHT_OF),
    (("next", "to"), Relation.NEXT_TO),
    (("behind",), Relation.BEHIND),
    (("above",), Relation.ON_TOP_OF),
    (("on",), Relation.ON_TOP_OF),
)


def _match_label(token: str) -> Optional[SegmentLabel]:
    if token in LABEL_SYNONYMS:
        return LABEL_SYNONYMS[token]
    try:
        return SegmentLabel(token)
    except ValueError:
        return None


def _skip_fillers(tokens: tuple[str, ...], i: int) -> int:
    while i < len(tokens) and tokens[i] in _SKIP:
        i += 1
    return i


def _parse_loc_phrase(tokens: tuple[str, ...], i: int) -> Union[RelLoc, Unparsable]:
    for phrase, relation in _RELATION_PHRASES:
        if tokens[i:i + len(phrase)] == phrase:
            j = _skip_fillers(tokens, i + len(phrase))
            if j >= len(tokens):
                return Unparsable(f"bad location phrase: missing anchor after '{' '.join(phrase)}'")
            anchor_tok = tokens[j]
            if anchor_tok == "house":
                anchor = None
            else:
                anchor = _match_label(anchor_tok)
                if anchor is None:
                    return Unparsable(f"bad location phrase: unknown anchor '{anchor_tok}'")
            j = _skip_fillers(tokens, j + 1)
            if j < len(tokens):
                return Unparsable(f"bad location phrase: trailing words '{' '.join(tokens[j:])}'")
            return RelLoc(relation, anchor)
    return Unparsable(f"bad location phrase: '{' '.join(tokens[i:])}'")


def parse_core(u: Utterance) -> CommandAst:
    """Map an utterance onto the core action space. Total and deterministic."""
    tokens = u.tokens
    if not tokens:
        return Unparsable("unknown verb: empty utterance")
    if tokens[0] in CONVERSATIONAL_OPENERS:
        return Conversational()
    verb = tokens[0]
    if verb in DESTROY_VERBS:
        i = _skip_fillers(tokens, 1)
        if i >= len(tokens):
            return Unparsable("unknown label: missing object")
        label = _match_label(tokens[i])
        if label is None:
            return Unparsable(f"unknown label: '{tokens[i]}'")
        i = _skip_fillers(tokens, i + 1)
        if i < len(tokens):
            return Unparsable(f"bad location phrase: destroy takes none, got '{' '.join(tokens[i:])}'")
        return DestroyCommand(label)
    if verb in BUILD_VERBS:
        i = _skip_fillers(tokens, 1)
        size = SizeWord.DEFAULT
        length: Optional[int] = None
        if i < len(tokens) and tokens[i] in _SIZE_WORDS:
            size = _SIZE_WORDS[tokens[i]]
            i = _skip_fillers(tokens, i + 1)
        elif i < len(tokens) and tokens[i].isdigit():
            length = int(tokens[i])
            i += 1
            if i < len(tokens) and tokens[i] in ("block", "blocks"):
                i += 1
                if i < len(tokens) and tokens[i] == "of":
                    i += 1
            i = _skip_fillers(tokens, i)
        if i >= len(tokens):
            return Unparsable("unknown label: missing object")
        label = _match_label(tokens[i])
        if label is None:
            return Unparsable(f"unknown label: '{tokens[i]}'")
        i = _skip_fillers(tokens, i + 1)
        if i >= len(tokens):
            return BuildCommand(label, size, length, None)
        loc = _parse_loc_phrase(tokens, i)
        if isinstance(loc, Unparsable):
            return loc
        return BuildCommand(label, size, length, loc)
    return Unparsable(f"unknown verb: '{verb}'")


DEFINITION_PREFIX = re.compile(r"^\s*def:\s*", re.IGNORECASE)


def is_definition(raw: str) -> bool:
    return DEFINITION_PREFIX.match(raw) is not None


def parse_definition(raw: str) -> DefineCommand:
    """Parse `def: head; body1; ...; bodyN` with at least one body command."""
    m = DEFINITION_PREFIX.match(raw)
    if m is None:
        raise DefinitionSyntaxError("missing 'def:' prefix")
    segments = [s.strip() for s in raw[m.end():].split(";")]
    if len(segments) < 2:
        raise DefinitionSyntaxError("definition needs a head and at least one body command")
    if any(not s for s in segments):
        raise DefinitionSyntaxError("empty segment in definition")
    head = Utterance.from_raw(segments[0])
    if not head.tokens:
        raise DefinitionSyntaxError("definition head has no words")
    body = tuple(Utterance.from_raw(s) for s in segments[1:])
    return DefineCommand(head, body)


def format_definition(cmd: DefineCommand) -> str:
    """Serialize a definition back to the `def:` wire shape."""
    return "def: " + "; ".join([cmd.head.raw, *(b.raw for b in cmd.body)])
