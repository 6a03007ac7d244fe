"""Online parser updates: embeddings, the shared definition store, expansion.

Utterances are embedded token-by-token and averaged into one sentence vector;
definitions are retrieved by cosine nearest neighbor over a population-shared,
append-only store. The threshold sits near 1.0, so retrieval behaves like a
dictionary keyed by phrasing rather than fuzzy paraphrase search.
"""
from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, replace
from typing import Optional, Protocol, Sequence

import numpy as np

from .errors import SelfReferenceError, StoreError, ExpansionCycleError, ExpansionDepthError
from .grammar import Utterance

DEFAULT_DIM = 128
DEFAULT_THRESHOLD = 0.95
DEFAULT_MAX_DEPTH = 16
_HASH_SEED = 0x5EED_CAFE

STORE_DOC_VERSION = 1


class Embedder(Protocol):
    """Token embedding plus mean aggregation into a sentence vector."""

    @property
    def fingerprint(self) -> str: ...

    def token_embed(self, token: str) -> np.ndarray: ...

    def aggregate(self, vectors: Sequence[np.ndarray]) -> np.ndarray: ...


class HashedEmbedder:
    """Deterministic pseudo-random unit vector per token, derived from a
    stable hash. A learned encoder can drop in behind the same interface."""

    def __init__(self, dim: int = DEFAULT_DIM, seed: int = _HASH_SEED):
        if dim < 2:
            raise ValueError("embedding dimension must be >= 2")
        self.dim = dim
        self.seed = seed
        self._cache: dict[str, np.ndarray] = {}

    @property
    def fingerprint(self) -> str:
        return f"hashed/d{self.dim}/s{self.seed:x}"

    def token_embed(self, token: str) -> np.ndarray:
        vec = self._cache.get(token)
        if vec is None:
            digest = hashlib.blake2b(f"{self.seed}:{token}".encode("utf-8"), digest_size=8).digest()
            rng = np.random.default_rng(int.from_bytes(digest, "big"))
            raw = rng.standard_normal(self.dim)
            vec = raw / np.linalg.norm(raw)
            vec.setflags(write=False)
            self._cache[token] = vec
        return vec

    def aggregate(self, vectors: Sequence[np.ndarray]) -> np.ndarray:
        if not vectors:
            raise ValueError("nothing to aggregate")
        # Rows are summed in a canonical order so the mean is bit-identical
        # under any permutation of the same token multiset.
        stacked = np.stack(vectors)
        order = np.lexsort(stacked.T[::-1])
        return stacked[order].mean(axis=0)


def embed(u: Utterance, embedder: Embedder) -> np.ndarray:
    """Mean of the per-token vectors of `u`."""
    if not u.tokens:
        raise ValueError("cannot embed an utterance with no tokens")
    return embedder.aggregate([embedder.token_embed(t) for t in u.tokens])


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    denom = float(np.linalg.norm(a) * np.linalg.norm(b))
    if denom == 0.0:
        return 0.0
    return float(np.dot(a, b) / denom)


@dataclass(frozen=True, eq=False)
class DefinitionEntry:
    head: Utterance
    embedding: np.ndarray
    body: tuple[Utterance, ...]
    author: str
    created_at: float

    def body_raws(self) -> tuple[str, ...]:
        return tuple(b.raw for b in self.body)


class DefinitionStore:
    """Population-shared nearest-neighbor store of command definitions.

    Reads take a consistent snapshot of the entry list; writes serialize
    through one lock. Redefining an identical-token head replaces the old
    entry. Lookup is a linear scan — stores here hold tens of entries.
    """

    def __init__(self, embedder: Optional[Embedder] = None,
                 threshold: float = DEFAULT_THRESHOLD):
        if not 0.0 <= threshold <= 1.0:
            raise ValueError("threshold must be within [0, 1]")
        self.embedder: Embedder = embedder or HashedEmbedder()
        self.threshold = threshold
        self._entries: tuple[DefinitionEntry, ...] = ()
        self._write_lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> tuple[DefinitionEntry, ...]:
        return self._entries


def define(store: DefinitionStore, head: Utterance, body: Sequence[Utterance],
           author: str = "user") -> DefinitionStore:
    """Append (or replace) a definition; it is retrievable immediately."""
    if not head.tokens:
        raise StoreError("definition head has no tokens")
    if not body:
        raise StoreError("definition body is empty")
    if any(not b.tokens for b in body):
        raise StoreError("definition body contains an empty utterance")
    if any(b.tokens == head.tokens for b in body):
        raise SelfReferenceError(f"definition head {head.raw!r} appears in its own body")
    entry = DefinitionEntry(
        head=head,
        embedding=embed(head, store.embedder),
        body=tuple(body),
        author=author,
        created_at=time.time(),
    )
    with store._write_lock:
        kept = tuple(e for e in store._entries if e.head.tokens != head.tokens)
        store._entries = kept + (entry,)
    return store


def lookup(store: DefinitionStore, u: Utterance,
           embedder: Optional[Embedder] = None) -> Optional[tuple[DefinitionEntry, float]]:
    """Best entry by cosine similarity, if it clears the store threshold.

    Ties go to the most recently added entry.
    """
    if not u.tokens:
        raise ValueError("cannot look up an empty utterance")
    entries = store._entries
    if not entries:
        return None
    query = embed(u, embedder or store.embedder)
    best: Optional[tuple[DefinitionEntry, float]] = None
    for entry in entries:
        sim = cosine(query, entry.embedding)
        if best is None or sim >= best[1]:
            best = (entry, sim)
    if best is not None and best[1] >= store.threshold:
        return best
    return None


def expand(store: DefinitionStore, u: Utterance,
           embedder: Optional[Embedder] = None,
           max_depth: int = DEFAULT_MAX_DEPTH) -> list[Utterance]:
    """Depth-first, left-to-right expansion down to core-parsable leaves."""
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")

    def walk(current: Utterance, path: frozenset[tuple[str, ...]], depth: int) -> list[Utterance]:
        hit = lookup(store, current, embedder)
        if hit is None:
            return [current]
        entry, _sim = hit
        key = entry.head.tokens
        if key in path:
            raise ExpansionCycleError(entry.head.raw)
        if depth > max_depth:
            raise ExpansionDepthError(
                f"expansion of {u.raw!r} exceeds max depth {max_depth}")
        leaves: list[Utterance] = []
        for sub in entry.body:
            leaves.extend(walk(sub, path | {key}, depth + 1))
        return leaves

    return walk(u, frozenset(), 1)


SEED_AUTHOR = "seed"

# Pre-populated commands available to every fresh store. The body of
# "make me a place to sit down" is approximate: only its observed effect
# (bed blocks appearing) is recorded, so a single bed build stands in.
SEED_DEFINITIONS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("make the house taller",
     ("remove the roof", "build a huge wall", "build a large roof")),
    ("build a skylight",
     ("build a tiny window on the roof",)),
    ("make me a place to sit down",
     ("build a bed",)),
)


def seed_store(store: DefinitionStore) -> DefinitionStore:
    """Populate a fresh store with the starter command set."""
    if len(store):
        raise StoreError("seed_store requires an empty store")
    for head, body in SEED_DEFINITIONS:
        define(store, Utterance.from_raw(head),
               [Utterance.from_raw(b) for b in body], author=SEED_AUTHOR)
    return store


# ---------------------------------------------------------------------------
# Snapshot document (embeddings are recomputed on load)
# ---------------------------------------------------------------------------

def save_store(store: DefinitionStore) -> str:
    doc = {
        "v": STORE_DOC_VERSION,
        "embedder": store.embedder.fingerprint,
        "threshold": store.threshold,
        "entries": [
            {
                "head": e.head.raw,
                "body": list(e.body_raws()),
                "author": e.author,
                "created_at": e.created_at,
            }
            for e in store.entries
        ],
    }
    return json.dumps(doc, indent=2)


def load_store(text: str, embedder: Optional[Embedder] = None) -> DefinitionStore:
    doc = json.loads(text)
    if doc.get("v") != STORE_DOC_VERSION:
        raise StoreError(f"unsupported store document version: {doc.get('v')!r}")
    embedder = embedder or HashedEmbedder()
    if doc.get("embedder") != embedder.fingerprint:
        raise StoreError(
            f"embedder mismatch: document {doc.get('embedder')!r}, loader {embedder.fingerprint!r}")
    store = DefinitionStore(embedder=embedder, threshold=float(doc.get("threshold", DEFAULT_THRESHOLD)))
    for rec in doc["entries"]:
        define(store, Utterance.from_raw(rec["head"]),
               [Utterance.from_raw(b) for b in rec["body"]], author=rec["author"])
        # keep original timestamps so ordering survives the round trip
        last = store._entries[-1]
        store._entries = store._entries[:-1] + (replace(last, created_at=rec["created_at"]),)
    return store
