"""Session-log metrics: naturalization curves, expressiveness, transfer.

All functions are pure over logs, so recomputing from a persisted log gives
the same numbers as computing live. Definition exchanges are flattened into
their per-body-command classifications; conversational turns are dropped.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .grammar import word_count
from .session import Classification, Exchange, Resolution, SessionLog, classify_exchange

DEFAULT_SESSION_FILTER = frozenset({2, 3})


@dataclass(frozen=True)
class CurvePoint:
    exchange_index: int
    frac_core: float
    frac_induced: float
    frac_unparsable: float


@dataclass(frozen=True)
class FlatEntry:
    """One classified unit of dialogue after flattening definitions."""

    classification: Classification
    raw: str
    body: Optional[tuple[str, ...]]  # one-level body when induced
    leaves: tuple[str, ...]          # executed leaf utterances, when known
    house_id: str
    session_index: int
    matched_head: Optional[str]
    leaves_attempted: int = 0
    leaves_unparsable: int = 0


def expressiveness(u_raw: str, body: Sequence[str]) -> float:
    """Total body word count divided by the command's own word count."""
    denom = word_count(u_raw)
    if denom == 0:
        raise ValueError("cannot score an empty utterance")
    return sum(word_count(b) for b in body) / denom


def flatten_logs(
    logs: Iterable[SessionLog],
    sessions: frozenset[int] = DEFAULT_SESSION_FILTER,
) -> list[FlatEntry]:
    """Time-ordered, session-filtered, definition-flattened entries."""
    stamped: list[tuple[float, str, int, SessionLog, Exchange]] = []
    for log in logs:
        if log.session_index not in sessions:
            continue
        for i, e in enumerate(log.exchanges):
            stamped.append((e.started_at, log.session_id, i, log, e))
    stamped.sort(key=lambda item: (item[0], item[1], item[2]))

    entries: list[FlatEntry] = []
    for _, _, _, log, e in stamped:
        classes = classify_exchange(e)
        if e.resolution is Resolution.DEFINITION:
            for sub, cls in zip(e.sub_exchanges, classes):
                entries.append(
                    FlatEntry(
                        classification=cls,
                        raw=sub.raw,
                        body=sub.matched_body,
                        leaves=(),
                        house_id=log.house_id,
                        session_index=log.session_index,
                        matched_head=None,
                    )
                )
            continue
        for cls in classes:
            attempted = len(e.leaves)
            failed = sum(1 for l in e.leaves if not l.ok)
            entries.append(
                FlatEntry(
                    classification=cls,
                    raw=e.raw,
                    body=e.matched_body,
                    leaves=tuple(l.raw for l in e.leaves),
                    house_id=log.house_id,
                    session_index=log.session_index,
                    matched_head=e.matched_head,
                    leaves_attempted=attempted,
                    leaves_unparsable=failed,
                )
            )
    return entries


def naturalization_curve(
    logs: Iterable[SessionLog],
    sessions: frozenset[int] = DEFAULT_SESSION_FILTER,
) -> list[CurvePoint]:
    """Cumulative core/induced/unparsable fractions per flattened exchange."""
    counts = {Classification.CORE: 0, Classification.INDUCED: 0, Classification.UNPARSABLE: 0}
    points: list[CurvePoint] = []
    for i, entry in enumerate(flatten_logs(logs, sessions), start=1):
        counts[entry.classification] += 1
        total = sum(counts.values())
        points.append(
            CurvePoint(
                exchange_index=i,
                frac_core=counts[Classification.CORE] / total,
                frac_induced=counts[Classification.INDUCED] / total,
                frac_unparsable=counts[Classification.UNPARSABLE] / total,
            )
        )
    return points


def entry_expressiveness(entry: FlatEntry, full_expansion: bool = False) -> Optional[float]:
    """Expressiveness of one flattened entry; None when excluded (unparsable).

    Core entries score exactly 1.0. Induced entries use the one-level
    definition body by default; `full_expansion` scores against the executed
    core leaves instead.
    """
    if entry.classification is Classification.UNPARSABLE:
        return None
    if entry.classification is Classification.CORE:
        return 1.0
    body = entry.leaves if (full_expansion and entry.leaves) else entry.body
    if not body:
        return 1.0
    return expressiveness(entry.raw, body)


def expressiveness_curve(
    logs: Iterable[SessionLog],
    sessions: frozenset[int] = DEFAULT_SESSION_FILTER,
    full_expansion: bool = False,
) -> list[tuple[int, float]]:
    """Running mean expressiveness over the flattened sequence.

    Unparsable entries keep their index but do not move the mean; indices
    before the first scored entry emit no point.
    """
    total, scored = 0.0, 0
    points: list[tuple[int, float]] = []
    for i, entry in enumerate(flatten_logs(logs, sessions), start=1):
        value = entry_expressiveness(entry, full_expansion)
        if value is not None:
            total += value
            scored += 1
        if scored:
            points.append((i, total / scored))
    return points


@dataclass(frozen=True)
class TransferRow:
    house_id: str
    leaves_attempted: int
    leaves_unparsable: int


TransferReport = dict[str, list[TransferRow]]


def transfer_report(
    logs: Iterable[SessionLog],
    sessions: frozenset[int] = frozenset({1, 2, 3}),
) -> TransferReport:
    """Per defined command executed on >= 2 houses: leaf success by house."""
    by_head: dict[str, dict[str, list[int]]] = {}
    for entry in flatten_logs(logs, sessions):
        if entry.matched_head is None:
            continue
        per_house = by_head.setdefault(entry.matched_head, {})
        tally = per_house.setdefault(entry.house_id, [0, 0])
        tally[0] += entry.leaves_attempted
        tally[1] += entry.leaves_unparsable
    report: TransferReport = {}
    for head, per_house in by_head.items():
        if len(per_house) < 2:
            continue
        report[head] = [
            TransferRow(house_id, attempted, failed)
            for house_id, (attempted, failed) in sorted(per_house.items())
        ]
    return report


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

def naturalization_csv(points: Sequence[CurvePoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["exchange_index", "frac_core", "frac_induced", "frac_unparsable"])
    for p in points:
        writer.writerow([p.exchange_index, repr(p.frac_core), repr(p.frac_induced),
                         repr(p.frac_unparsable)])
    return buf.getvalue()


def expressiveness_csv(points: Sequence[tuple[int, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["exchange_index", "expressiveness_mean"])
    for index, mean in points:
        writer.writerow([index, repr(mean)])
    return buf.getvalue()
