"""Term extraction and ranking over patent titles and abstracts.

Terms are the finest-grained design stimuli: a term is either a single
non-stopword token or a stopword-delimited phrase of up to six tokens.
The stopword list is a pinned package asset (``data/stopwords.txt``);
its content hash is recorded in every build manifest so profiles stay
reproducible.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass
from importlib.resources import files
from typing import Iterable, Mapping

from .corpus import CorpusIndex, tokenize

MAX_PHRASE_TOKENS = 6

RANK_MODES = ("frequency", "tfidf")


def _stopwords_bytes() -> bytes:
    return files("techatlas").joinpath("data/stopwords.txt").read_bytes()


STOPWORDS: frozenset[str] = frozenset(
    line.strip() for line in _stopwords_bytes().decode("utf-8").splitlines() if line.strip()
)


def stopwords_sha256() -> str:
    """Content hash of the shipped stopword list, as recorded in manifests."""
    return hashlib.sha256(_stopwords_bytes()).hexdigest()


class TermError(Exception):
    """Invalid scope or ranking request."""


def extract_terms(text: str) -> Counter:
    """Multiset of terms in *text*.

    Tokens are lowercased and split on non letter/digit/hyphen
    characters, then stopwords are dropped. Each maximal run of
    consecutive surviving tokens contributes every unigram, plus the
    full run as one phrase when the run has 2..6 tokens; longer runs
    contribute sliding 6-token windows instead of the full run.
    """
    counts: Counter = Counter()
    run: list[str] = []

    def flush() -> None:
        if not run:
            return
        counts.update(run)
        if 2 <= len(run) <= MAX_PHRASE_TOKENS:
            counts[" ".join(run)] += 1
        elif len(run) > MAX_PHRASE_TOKENS:
            for start in range(len(run) - MAX_PHRASE_TOKENS + 1):
                counts[" ".join(run[start : start + MAX_PHRASE_TOKENS])] += 1
        run.clear()

    for token in tokenize(text):
        if token in STOPWORDS:
            flush()
        else:
            run.append(token)
    flush()
    return counts


@dataclass(frozen=True)
class TermProfile:
    """Term counts for one scope: a field code or an explicit patent set."""

    scope: str | frozenset[str]
    counts: Mapping[str, int]


def term_frequencies(scope: Iterable[str], index: CorpusIndex) -> TermProfile:
    """Aggregate term counts over the titles and abstracts of *scope* patents."""
    ids = frozenset(scope)
    counts: Counter = Counter()
    for pid in sorted(ids):
        record = index.records.get(pid)
        if record is None:
            raise TermError(f"unknown patent id {pid!r}")
        counts.update(extract_terms(record.title))
        counts.update(extract_terms(record.abstract))
    return TermProfile(scope=ids, counts=dict(counts))


@dataclass(frozen=True)
class FieldTermRegistry:
    """Per-field term profiles at one level, plus the document frequencies
    (here: number of fields containing each term) that TFIDF needs."""

    level: int
    profiles: Mapping[str, TermProfile]
    docfreq: Mapping[str, int]

    @property
    def n_fields(self) -> int:
        return len(self.profiles)


def build_field_registry(
    index: CorpusIndex,
    level: int,
    per_patent: Mapping[str, Counter] | None = None,
) -> FieldTermRegistry:
    """Build field-scoped profiles for every field at *level*.

    ``per_patent`` optionally supplies precomputed per-patent term
    multisets (extraction is level-independent, so builds share one
    pass over the corpus for both levels).
    """
    if per_patent is None:
        per_patent = extract_per_patent(index)
    profiles: dict[str, TermProfile] = {}
    docfreq: Counter = Counter()
    for field in sorted(index.fields_at_level[level]):
        counts: Counter = Counter()
        for pid in sorted(index.members(level, field)):
            counts.update(per_patent[pid])
        profiles[field] = TermProfile(scope=field, counts=dict(counts))
        docfreq.update(counts.keys())
    return FieldTermRegistry(level=level, profiles=profiles, docfreq=dict(docfreq))


def extract_per_patent(index: CorpusIndex) -> dict[str, Counter]:
    """Term multiset of title+abstract for every record."""
    out: dict[str, Counter] = {}
    for pid, record in index.records.items():
        counts = extract_terms(record.title)
        counts.update(extract_terms(record.abstract))
        out[pid] = counts
    return out


def rank_terms(
    profile: TermProfile,
    mode: str = "frequency",
    k: int = 10,
    registry: FieldTermRegistry | None = None,
) -> list[tuple[str, float]]:
    """Top-*k* terms of *profile*, descending by score, ties lexicographic.

    ``frequency`` scores by raw occurrence count. ``tfidf`` scores by
    count * ln(N / df) where N is the number of fields in *registry*
    and df the number of fields containing the term.
    """
    if mode not in RANK_MODES:
        raise TermError(f"unknown ranking mode {mode!r}")
    if k < 0:
        raise TermError("k must be >= 0")
    if mode == "tfidf":
        if registry is None:
            raise TermError("tfidf ranking requires a field term registry")
        n = registry.n_fields
        scored = []
        for term, count in profile.counts.items():
            df = registry.docfreq.get(term)
            if df is None:
                raise TermError(f"term {term!r} missing from registry docfreq")
            scored.append((term, count * math.log(n / df)))
    else:
        scored = [(term, float(count)) for term, count in profile.counts.items()]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:k]
