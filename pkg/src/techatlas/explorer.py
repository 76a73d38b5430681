"""Position a query in the technology space and retrieve stimuli around it.

A query is one contiguous token phrase by default; double-quoted
segments turn it into an AND of phrases (remaining bare words each
match as single-token phrases). Fields holding at least one matching
patent form the red space, all other fields at the level are white
space. Information panels expose the term / document / inventor
stimuli of a field, query-filtered when the field is red.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .corpus import _SECTIONS, CorpusIndex, tokenize
from .proximity import ProximityMatrix, domain_proximity
from .terms import FieldTermRegistry, rank_terms, term_frequencies

SCOPE_ALL_FIELD_PATENTS = "all-field-patents"
SCOPE_QUERY_FILTERED = "query-filtered"


class ExplorerError(Exception):
    pass


class UnpositionedError(ExplorerError):
    """The query matched nothing; there is no target domain to rank from."""


def parse_query(query: str) -> list[tuple[str, ...]]:
    """Split a query into token phrases.

    Without quotes the whole query is a single phrase. With quotes,
    each quoted segment is a phrase and every leftover bare word is a
    one-word phrase; all phrases must match (AND).
    """
    if not query or not query.strip():
        raise ExplorerError("query must be non-empty")
    phrases: list[tuple[str, ...]] = []
    if '"' in query:
        parts = query.split('"')
        for outside in parts[0::2]:
            for word in outside.split():
                tokens = tuple(tokenize(word))
                if tokens:
                    phrases.append(tokens)
        for inside in parts[1::2]:
            tokens = tuple(tokenize(inside))
            if tokens:
                phrases.append(tokens)
    else:
        tokens = tuple(tokenize(query))
        if tokens:
            phrases.append(tokens)
    if not phrases:
        raise ExplorerError(f"query {query!r} contains no searchable tokens")
    return phrases


def _phrase_matches(index: CorpusIndex, phrase: Sequence[str]) -> set[str]:
    postings = [index.text_index.get(token) for token in phrase]
    if any(p is None for p in postings):
        return set()
    candidates = set(postings[0])
    for p in postings[1:]:
        candidates &= set(p)
    if len(phrase) == 1:
        return candidates
    matched = set()
    for pid in candidates:
        starts = set(postings[0][pid])
        for offset, p in enumerate(postings[1:], start=1):
            starts &= {q - offset for q in p[pid]}
            if not starts:
                break
        if starts:
            matched.add(pid)
    return matched


@dataclass(frozen=True)
class DomainPosition:
    """Where a query sits in the technology space at one level.

    ``x`` holds the non-zero footprint counts (matched patents per
    field, multi-class patents counting once per distinct field);
    ``red_fields`` is exactly its key set and ``white_fields`` the rest
    of the level. A position with no matches is flagged unpositioned
    and must not be fed to :func:`rank_nearby`.
    """

    query: str
    level: int
    matched_ids: frozenset[str]
    x: Mapping[str, int]
    red_fields: frozenset[str]
    white_fields: frozenset[str]

    @property
    def unpositioned(self) -> bool:
        return not self.matched_ids


def position_domain(index: CorpusIndex, query: str, level: int) -> DomainPosition:
    """Match the query phrase(s) against titles+abstracts and tally the
    footprint over fields at *level*."""
    phrases = parse_query(query)
    matched: set[str] | None = None
    for phrase in phrases:
        hits = _phrase_matches(index, phrase)
        matched = hits if matched is None else matched & hits
        if not matched:
            break
    matched = matched or set()

    x: Counter = Counter()
    for pid in matched:
        for fld in index.records[pid].fields_at(level):
            x[fld] += 1
    red = frozenset(x)
    white = frozenset(index.fields_at_level[level]) - red
    return DomainPosition(
        query=query,
        level=level,
        matched_ids=frozenset(matched),
        x=dict(sorted(x.items())),
        red_fields=red,
        white_fields=white,
    )


@dataclass(frozen=True)
class NearbyRanking:
    """White-space fields ordered by proximity to the target domain,
    descending, ties by field code."""

    target: DomainPosition
    entries: tuple[tuple[str, float], ...]


def nearby_ranking(position: DomainPosition, matrix: ProximityMatrix) -> NearbyRanking:
    """Full white-space ordering for *position*."""
    if position.unpositioned:
        raise UnpositionedError(
            f"query {position.query!r} matched no patents; nothing to rank from"
        )
    if matrix.level != position.level:
        raise ExplorerError("position and matrix levels differ")
    scored = [
        (fld, domain_proximity(matrix, position.x, fld))
        for fld in sorted(position.white_fields)
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return NearbyRanking(target=position, entries=tuple(scored))


def rank_nearby(
    position: DomainPosition, matrix: ProximityMatrix, k: int
) -> list[tuple[str, float]]:
    """Top-k prefix of the full nearby ordering (clamped to the white space)."""
    if k < 1:
        raise ExplorerError("k must be >= 1")
    return list(nearby_ranking(position, matrix).entries[:k])


@dataclass(frozen=True)
class FieldPanel:
    """The information panel for one field.

    White-space fields (or calls without a position) expose the whole
    field; red-space fields expose only the query-matching patents, so
    every listed document answers the query.
    """

    field: str
    stimulus_scope: str
    scope_ids: tuple[str, ...]
    top_terms: tuple[tuple[str, float], ...]
    patents_by_citations: tuple[tuple[str, str, int], ...]
    patents_by_recency: tuple[tuple[str, str, str], ...]
    top_inventors: tuple[tuple[str, int], ...]
    top_assignees: tuple[tuple[str, int], ...]


def field_code_level(field: str) -> int:
    """Level of a well-formed field code (3 or 4 chars); raises otherwise."""
    if (
        len(field) in (3, 4)
        and field[0] in _SECTIONS
        and field[1:3].isdigit()
        and (len(field) == 3 or field[3].isalpha())
        and field == field.upper()
    ):
        return len(field)
    raise ExplorerError(f"malformed field code {field!r}")


def field_panel(
    index: CorpusIndex,
    field: str,
    position: DomainPosition | None = None,
    k_terms: int = 10,
    k_patents: int = 10,
    term_mode: str = "frequency",
    registry: FieldTermRegistry | None = None,
) -> FieldPanel:
    """Assemble the panel for *field*.

    A position puts the panel in query-filtered mode when the field is
    in its red space; otherwise (white field, or no position) the scope
    is every patent of the field. A well-formed code absent from the
    corpus yields an empty panel, not an error.
    """
    level = field_code_level(field)
    if position is not None and position.level != level:
        raise ExplorerError(
            f"field {field!r} is level {level} but position is level {position.level}"
        )
    members = index.members(level, field)
    if position is not None and field in position.red_fields:
        scope = position.matched_ids & members
        mode = SCOPE_QUERY_FILTERED
    else:
        scope = members
        mode = SCOPE_ALL_FIELD_PATENTS

    profile = term_frequencies(scope, index)
    by_cites = top_patents(scope, index, sort="citations", k=k_patents)
    by_date = top_patents(scope, index, sort="recency", k=k_patents)
    return FieldPanel(
        field=field,
        stimulus_scope=mode,
        scope_ids=tuple(sorted(scope)),
        top_terms=tuple(rank_terms(profile, mode=term_mode, k=k_terms, registry=registry)),
        patents_by_citations=tuple(
            (pid, index.records[pid].title, index.citation_counts[pid]) for pid in by_cites
        ),
        patents_by_recency=tuple(
            (pid, index.records[pid].title, index.records[pid].grant_date) for pid in by_date
        ),
        top_inventors=tuple(top_actors(scope, index, kind="inventor", k=k_patents)),
        top_assignees=tuple(top_actors(scope, index, kind="assignee", k=k_patents)),
    )


def top_patents(scope: Iterable[str], index: CorpusIndex, sort: str, k: int) -> list[str]:
    """Scope ids ordered by descending citation count or grant date,
    ties by id; k=0 is an empty list."""
    ids = sorted(scope)
    for pid in ids:
        if pid not in index.records:
            raise ExplorerError(f"unknown patent id {pid!r}")
    if sort == "citations":
        ids.sort(key=lambda pid: index.citation_counts[pid], reverse=True)
    elif sort == "recency":
        ids.sort(key=lambda pid: index.records[pid].grant_date, reverse=True)
    else:
        raise ExplorerError(f"unknown sort {sort!r}")
    if k < 0:
        raise ExplorerError("k must be >= 0")
    return ids[:k]


def top_actors(
    scope: Iterable[str], index: CorpusIndex, kind: str, k: int
) -> list[tuple[str, int]]:
    """(name, patent count) tallies over the scope, descending, ties by name.

    A name counts once per patent that lists it, however many times.
    """
    if kind not in ("inventor", "assignee"):
        raise ExplorerError(f"unknown actor kind {kind!r}")
    counts: Counter = Counter()
    for pid in sorted(scope):
        record = index.records.get(pid)
        if record is None:
            raise ExplorerError(f"unknown patent id {pid!r}")
        names = record.inventors if kind == "inventor" else record.assignees
        counts.update(set(names))
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    if k < 0:
        raise ExplorerError("k must be >= 0")
    return ranked[:k]
