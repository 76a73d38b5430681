"""Idea capture, ranking by source-to-target proximity, and templates.

Every recorded idea freezes the proximity between its inspiration
source field and the target domain at creation time; rebuilding the
corpus later never rewrites history (the ledger line carries the build
manifest hash it was computed against). The ledger file is strictly
append-only JSON Lines.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .corpus import canonical_json
from .explorer import DomainPosition
from .proximity import ProximityMatrix, domain_proximity

HEURISTICS = ("combination", "analogy")
STIMULUS_KINDS = ("term", "document", "field")
IDEA_ORDERS = ("proximity_desc", "proximity_asc")


class IdeationError(Exception):
    pass


def render_idea(heuristic: str, stimulus_text: str, target_text: str) -> str:
    """One-sentence idea description from the heuristic's template.

    Interpolation is verbatim: no articles added, no punctuation, no
    trimming. Callers own the grammar of their stimulus text.
    """
    if not stimulus_text or not target_text:
        raise IdeationError("stimulus and target text must be non-empty")
    if heuristic == "combination":
        return f"Combine {stimulus_text} with {target_text}"
    if heuristic == "analogy":
        return f"Adopt {stimulus_text} to solve {target_text}"
    raise IdeationError(f"unknown heuristic {heuristic!r}")


@dataclass(frozen=True)
class IdeaDraft:
    heuristic: str
    stimulus_text: str
    stimulus_kind: str
    source_field: str
    target_query: str
    idea_text: str


@dataclass(frozen=True)
class IdeaRecord:
    """A captured idea with its inspiration provenance.

    ``omega`` is the source-to-target proximity at creation time;
    ``artifact_hash`` names the build it was computed against.
    """

    idea_id: str
    created_at: str
    heuristic: str
    stimulus_text: str
    stimulus_kind: str
    source_field: str
    target_query: str
    omega: float
    idea_text: str
    artifact_hash: str = ""

    def payload(self) -> dict:
        return {
            "idea_id": self.idea_id,
            "created_at": self.created_at,
            "heuristic": self.heuristic,
            "stimulus_text": self.stimulus_text,
            "stimulus_kind": self.stimulus_kind,
            "source_field": self.source_field,
            "target_query": self.target_query,
            "omega": self.omega,
            "idea_text": self.idea_text,
            "artifact_hash": self.artifact_hash,
        }


def rank_ideas(records: Iterable[IdeaRecord], order: str = "proximity_desc") -> list[IdeaRecord]:
    """Records sorted by omega (per *order*), ties by created_at then idea_id."""
    if order not in IDEA_ORDERS:
        raise IdeationError(f"unknown order {order!r}")
    sign = -1.0 if order == "proximity_desc" else 1.0
    return sorted(records, key=lambda r: (sign * r.omega, r.created_at, r.idea_id))


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class IdeaLedger:
    """Append-only idea store backed by one JSONL file.

    Appends are serialized by a lock and fsynced, so the on-disk ledger
    after n ideas is always a byte-prefix of the ledger after n+1.
    """

    def __init__(self, path: str | Path, clock: Callable[[], str] = _utc_now):
        self.path = Path(path)
        self._clock = clock
        self._lock = threading.Lock()
        self._records: list[IdeaRecord] = []
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line_no, line in enumerate(fh, start=1):
                    if not line.strip():
                        continue
                    try:
                        self._records.append(IdeaRecord(**json.loads(line)))
                    except (json.JSONDecodeError, TypeError) as exc:
                        raise IdeationError(
                            f"corrupt ledger {self.path} at line {line_no}: {exc}"
                        ) from exc

    @property
    def records(self) -> Sequence[IdeaRecord]:
        return tuple(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def record_idea(
        self,
        draft: IdeaDraft,
        position: DomainPosition,
        matrix: ProximityMatrix,
        artifact_hash: str = "",
    ) -> IdeaRecord:
        """Validate a draft, freeze its omega, and append it durably."""
        if draft.heuristic not in HEURISTICS:
            raise IdeationError(f"unknown heuristic {draft.heuristic!r}")
        if draft.stimulus_kind not in STIMULUS_KINDS:
            raise IdeationError(f"unknown stimulus kind {draft.stimulus_kind!r}")
        if not draft.idea_text.strip():
            raise IdeationError("idea text must be non-empty")
        if not draft.stimulus_text.strip():
            raise IdeationError("stimulus text must be non-empty")
        if draft.source_field not in matrix.fields:
            raise IdeationError(f"unknown source field {draft.source_field!r}")
        if draft.target_query != position.query:
            raise IdeationError(
                f"position was computed for {position.query!r}, not {draft.target_query!r}"
            )
        if position.unpositioned:
            raise IdeationError(
                f"target {draft.target_query!r} matched no patents; cannot place the idea"
            )
        omega = domain_proximity(matrix, position.x, draft.source_field)
        with self._lock:
            record = IdeaRecord(
                idea_id=f"idea-{len(self._records) + 1:06d}",
                created_at=self._clock(),
                heuristic=draft.heuristic,
                stimulus_text=draft.stimulus_text,
                stimulus_kind=draft.stimulus_kind,
                source_field=draft.source_field,
                target_query=draft.target_query,
                omega=omega,
                idea_text=draft.idea_text,
                artifact_hash=artifact_hash,
            )
            self._append(record)
        return record

    def _append(self, record: IdeaRecord) -> None:
        self._records.append(record)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(canonical_json(record.payload()) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def rank_ideas(self, order: str = "proximity_desc") -> list[IdeaRecord]:
        return rank_ideas(self._records, order=order)
