"""Patent corpus parsing, validation, and indexing.

The corpus file is UTF-8 JSON Lines: one record per line with keys
``id``, ``title``, ``abstract``, ``grant_date``, ``ipc``, ``cited``,
``inventors``, ``assignees``. Only ``id``, ``title`` and ``ipc`` are
mandatory; the rest default to empty.

Fields (technology classes) are derived from IPC codes at two levels:
level 3 is the 3-character class ("B60"), level 4 the 4-character
subclass ("B60K"). The finished :class:`CorpusIndex` is immutable and
safe to share across threads.
"""

from __future__ import annotations

import json
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

LEVELS = (3, 4)

_SECTIONS = frozenset("ABCDEFGH")

# Token = maximal run of letters, digits, and hyphens ("dual-mode" is one
# token). Underscore is a separator, everything non-alphanumeric is.
_TOKEN_RE = re.compile(r"(?:[^\W_]|-)+")

# YYYY, YYYY-MM, or YYYY-MM-DD; lexicographic order == chronological order.
_DATE_RE = re.compile(r"^\d{4}(?:-(?:0[1-9]|1[0-2])(?:-(?:0[1-9]|[12]\d|3[01]))?)?$")


class CorpusError(Exception):
    """Invalid corpus content (bad record, bad code, duplicate id)."""


def tokenize(text: str) -> list[str]:
    """Lowercase *text* and split on anything that is not a letter, digit, or hyphen."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class IpcCode:
    """A parsed IPC classification symbol.

    ``section`` ("B") prefixes ``class3`` ("B60") which prefixes
    ``subclass4`` ("B60K"); any finer suffix ("7/00") is kept in
    ``remainder`` but never interpreted.
    """

    section: str
    class3: str
    subclass4: str
    remainder: str = ""

    @classmethod
    def parse(cls, raw: str) -> "IpcCode":
        text = raw.strip()
        if not text:
            raise CorpusError("empty IPC code")
        head = text[:4].upper()
        section = head[0]
        if section not in _SECTIONS:
            raise CorpusError(f"invalid IPC code {raw!r}: invalid section {section!r}")
        if len(text) < 3 or not text[1:3].isdigit():
            raise CorpusError(f"invalid IPC code {raw!r}: expected two digits after section")
        if len(text) < 4 or not head[3].isalpha():
            raise CorpusError(f"invalid IPC code {raw!r}: missing subclass letter")
        return cls(
            section=section,
            class3=head[:3],
            subclass4=head,
            remainder=text[4:].strip(),
        )

    def field_at(self, level: int) -> str:
        """Field code at *level*: class3 for level 3, subclass4 for level 4."""
        if level == 3:
            return self.class3
        if level == 4:
            return self.subclass4
        raise ValueError(f"level must be 3 or 4, got {level}")

    def __str__(self) -> str:
        return f"{self.subclass4} {self.remainder}" if self.remainder else self.subclass4


def field_of(code: IpcCode, level: int) -> str:
    return code.field_at(level)


@dataclass(frozen=True)
class PatentRecord:
    """One granted patent, normalized.

    ``cited_ids`` is deduplicated, self-citation-free, and may reference
    ids outside the corpus (dangling references are legitimate).
    """

    id: str
    title: str
    abstract: str
    grant_date: str
    ipc_codes: tuple[IpcCode, ...]
    cited_ids: tuple[str, ...]
    inventors: tuple[str, ...]
    assignees: tuple[str, ...]

    def fields_at(self, level: int) -> frozenset[str]:
        return frozenset(code.field_at(level) for code in self.ipc_codes)


def _clean_str_list(value: object, key: str, where: str) -> list[str]:
    if value is None:
        return []
    if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
        raise CorpusError(f"{where}: {key} must be a list of strings")
    return [v.strip() for v in value if v.strip()]


def parse_record(line: str, line_no: int | None = None) -> PatentRecord:
    """Parse one corpus line into a validated :class:`PatentRecord`.

    Raises :class:`CorpusError` for missing id/title/ipc, an unparseable
    IPC code, or a malformed grant date. ``line_no`` is included in the
    message when given.
    """
    where = f"line {line_no}" if line_no is not None else "record"
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{where}: not valid JSON ({exc.msg})") from exc
    if not isinstance(raw, dict):
        raise CorpusError(f"{where}: expected a JSON object")

    pid = raw.get("id")
    if not isinstance(pid, str) or not pid.strip():
        raise CorpusError(f"{where}: missing id")
    pid = pid.strip()
    where = f"{where} (id {pid})" if line_no is not None else f"record {pid}"

    title = raw.get("title")
    if not isinstance(title, str) or not title.strip():
        raise CorpusError(f"{where}: missing title")

    abstract = raw.get("abstract") or ""
    if not isinstance(abstract, str):
        raise CorpusError(f"{where}: abstract must be a string")

    grant_date = raw.get("grant_date") or ""
    if not isinstance(grant_date, str):
        raise CorpusError(f"{where}: grant_date must be a string")
    grant_date = grant_date.strip()
    if grant_date and not _DATE_RE.match(grant_date):
        raise CorpusError(f"{where}: malformed grant_date {grant_date!r}")

    ipc_raw = raw.get("ipc")
    if not isinstance(ipc_raw, list) or not ipc_raw:
        raise CorpusError(f"{where}: missing ipc_codes")
    try:
        ipc_codes = tuple(IpcCode.parse(code) for code in ipc_raw)
    except CorpusError as exc:
        raise CorpusError(f"{where}: {exc}") from exc

    cited: list[str] = []
    seen: set[str] = set()
    for cid in _clean_str_list(raw.get("cited"), "cited", where):
        if cid == pid or cid in seen:
            continue
        seen.add(cid)
        cited.append(cid)

    return PatentRecord(
        id=pid,
        title=title.strip(),
        abstract=abstract.strip(),
        grant_date=grant_date,
        ipc_codes=ipc_codes,
        cited_ids=tuple(cited),
        inventors=tuple(_clean_str_list(raw.get("inventors"), "inventors", where)),
        assignees=tuple(_clean_str_list(raw.get("assignees"), "assignees", where)),
    )


@dataclass(frozen=True)
class CorpusIndex:
    """Immutable lookup structures over a parsed corpus.

    ``text_index`` maps token -> patent id -> positions, where title
    tokens occupy positions ``0..t-1`` and abstract tokens start at
    ``t+1``. The one-slot gap keeps phrases from matching across the
    title/abstract boundary.
    """

    records: Mapping[str, PatentRecord]
    fields_at_level: Mapping[int, frozenset[str]]
    field_members: Mapping[int, Mapping[str, frozenset[str]]]
    citation_counts: Mapping[str, int]
    text_index: Mapping[str, Mapping[str, tuple[int, ...]]]

    def members(self, level: int, field: str) -> frozenset[str]:
        return self.field_members[level].get(field, frozenset())

    def canonical_payload(self) -> dict:
        """Order-independent dict rendering of the whole index.

        Two indexes built from permutations of the same record stream
        serialize to identical bytes via :func:`canonical_json`.
        """
        return {
            "records": [record_payload(r) for _, r in sorted(self.records.items())],
            "fields_at_level": {
                str(level): sorted(fields) for level, fields in self.fields_at_level.items()
            },
            "field_members": {
                str(level): {f: sorted(ids) for f, ids in sorted(members.items())}
                for level, members in self.field_members.items()
            },
            "citation_counts": dict(sorted(self.citation_counts.items())),
            "text_index": {
                token: {pid: list(pos) for pid, pos in sorted(postings.items())}
                for token, postings in sorted(self.text_index.items())
            },
        }


def record_payload(record: PatentRecord) -> dict:
    """JSON-able dict for one record (IPC codes as strings)."""
    return {
        "id": record.id,
        "title": record.title,
        "abstract": record.abstract,
        "grant_date": record.grant_date,
        "ipc": [str(code) for code in record.ipc_codes],
        "cited": list(record.cited_ids),
        "inventors": list(record.inventors),
        "assignees": list(record.assignees),
    }


def canonical_json(payload: object) -> str:
    """The one JSON writer used for every persisted artifact: sorted keys, compact, UTF-8."""
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def build_corpus_index(records: Iterable[PatentRecord]) -> CorpusIndex:
    """Index a record stream. Deterministic for any input order.

    Raises :class:`CorpusError` on duplicate ids, naming both stream
    positions (1-based).
    """
    by_id: dict[str, PatentRecord] = {}
    ordinal: dict[str, int] = {}
    for n, record in enumerate(records, start=1):
        if record.id in by_id:
            raise CorpusError(
                f"duplicate id {record.id!r} (records {ordinal[record.id]} and {n})"
            )
        by_id[record.id] = record
        ordinal[record.id] = n

    ordered = dict(sorted(by_id.items()))

    field_members: dict[int, dict[str, set[str]]] = {3: defaultdict(set), 4: defaultdict(set)}
    citation_counts: dict[str, int] = {pid: 0 for pid in ordered}
    text_index: dict[str, dict[str, list[int]]] = defaultdict(dict)

    for pid, record in ordered.items():
        for level in LEVELS:
            for field in record.fields_at(level):
                field_members[level][field].add(pid)
        for cid in record.cited_ids:
            if cid in citation_counts:
                citation_counts[cid] += 1
        title_tokens = tokenize(record.title)
        abstract_tokens = tokenize(record.abstract)
        offset = len(title_tokens) + 1  # gap slot blocks cross-boundary phrases
        for pos, token in enumerate(title_tokens):
            text_index[token].setdefault(pid, []).append(pos)
        for pos, token in enumerate(abstract_tokens):
            text_index[token].setdefault(pid, []).append(offset + pos)

    return CorpusIndex(
        records=ordered,
        fields_at_level={
            level: frozenset(field_members[level].keys()) for level in LEVELS
        },
        field_members={
            level: {f: frozenset(ids) for f, ids in sorted(field_members[level].items())}
            for level in LEVELS
        },
        citation_counts=citation_counts,
        text_index={
            token: {pid: tuple(pos) for pid, pos in postings.items()}
            for token, postings in text_index.items()
        },
    )


def iter_corpus_file(path) -> Iterable[PatentRecord]:
    """Yield records from a corpus file, failing fast with line numbers."""
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            yield parse_record(line, line_no=line_no)


def load_corpus(path) -> CorpusIndex:
    """Parse and index a corpus file.

    Collects every parse error (and duplicate id) before raising, so the
    report names all offending lines at once.
    """
    errors: list[str] = []
    records: list[PatentRecord] = []
    first_line: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = parse_record(line, line_no=line_no)
            except CorpusError as exc:
                errors.append(str(exc))
                continue
            if record.id in first_line:
                errors.append(
                    f"line {line_no}: duplicate id {record.id!r}"
                    f" (first seen at line {first_line[record.id]})"
                )
                continue
            first_line[record.id] = line_no
            records.append(record)
    if errors:
        shown = "\n".join(errors[:20])
        more = f"\n... and {len(errors) - 20} more" if len(errors) > 20 else ""
        raise CorpusError(f"corpus rejected, {len(errors)} error(s):\n{shown}{more}")
    return build_corpus_index(records)
