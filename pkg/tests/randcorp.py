"""Randomized corpora and independent oracles for the test suite.

The oracles deliberately avoid the library's data structures: they work
on raw record dicts, slice IPC strings by hand, and evaluate formulas
directly, so that agreement with the library is meaningful.
"""

from __future__ import annotations

import random
import re

from techatlas.corpus import PatentRecord, parse_record
import json

SECTIONS = "ABCDEFGH"
WORDS = (
    "sensor module assembly bearing actuator housing valve circuit membrane "
    "coating frame gear clutch antenna battery filter nozzle pump spring panel "
    "layer shaft controller display wheel hub motor composite polymer alloy"
).split()

_ORACLE_TOKEN = re.compile(r"[0-9a-z\-]+")  # ASCII variant of the token rule


def random_fields(rng: random.Random, max_fields: int = 20) -> list[str]:
    """2..max_fields subclass codes spread over at least two classes."""
    n_classes = rng.randint(2, min(10, max_fields))
    classes = set()
    while len(classes) < n_classes:
        classes.add(f"{rng.choice(SECTIONS)}{rng.randint(1, 99):02d}")
    subclasses: list[str] = []
    for cls in sorted(classes):
        for _ in range(rng.randint(1, 2)):
            sub = cls + chr(rng.randint(ord("A"), ord("Z")))
            if sub not in subclasses and len(subclasses) < max_fields:
                subclasses.append(sub)
    return subclasses


def random_corpus(
    rng: random.Random,
    max_patents: int = 500,
    max_fields: int = 20,
    with_text: bool = False,
    planted: dict[str, list[str]] | None = None,
) -> list[dict]:
    """Raw record dicts (corpus line schema).

    ``planted`` maps a phrase to the subclass codes whose first patents
    receive it in their title, e.g. {"rolling toy": ["A63H", "G09B"]}.

    Some corpora contain one "quiet" class whose patents cite nothing,
    so empty citation profiles (the 0/0 convention) occur in the wild.
    """
    subclasses = random_fields(rng, max_fields)
    n = rng.randint(max(3, len(subclasses)), max_patents)
    cited_pool = [f"z{k:04d}" for k in range(rng.randint(5, 80))]
    quiet_class = rng.choice(sorted({s[:3] for s in subclasses})) if rng.random() < 0.4 else None
    loud = [s for s in subclasses if s[:3] != quiet_class]
    records: list[dict] = []
    plant_queue: list[tuple[str, str]] = []
    for phrase, subs in (planted or {}).items():
        plant_queue.extend((phrase, sub) for sub in subs)

    for i in range(n):
        pid = f"r{i:04d}"
        # first pass covers every subclass, so the field set is exactly known
        codes = [subclasses[i] if i < len(subclasses) else rng.choice(subclasses)]
        if rng.random() < 0.15 and loud:
            codes.append(rng.choice(loud))
        cites: set[str] = set()
        if codes[0][:3] != quiet_class:
            for _ in range(rng.randint(0, 10)):
                if records and rng.random() < 0.4:
                    cites.add(records[rng.randrange(len(records))]["id"])
                else:
                    cites.add(rng.choice(cited_pool))
        title_words = rng.sample(WORDS, rng.randint(2, 5))
        abstract_words = [rng.choice(WORDS) for _ in range(rng.randint(0, 12))]
        if plant_queue and plant_queue[0][1] in codes:
            phrase, _ = plant_queue.pop(0)
            spot = rng.randint(0, len(title_words))
            title_words = title_words[:spot] + [phrase] + title_words[spot:]
        records.append(
            {
                "id": pid,
                "title": " ".join(title_words).capitalize(),
                "abstract": (" ".join(abstract_words) if with_text else ""),
                "grant_date": f"{rng.randint(1976, 2018)}-{rng.randint(1, 12):02d}",
                "ipc": [f"{c} {rng.randint(1, 99)}/00" for c in codes],
                "cited": sorted(cites - {pid}),
                "inventors": [rng.choice(("kim", "tan", "lee", "ava"))],
                "assignees": [rng.choice(("AcmeCo", "Bolt Ltd", "Cyn GmbH"))],
            }
        )
    # leftover plants: force them into fresh records of the right subclass
    for phrase, sub in plant_queue:
        pid = f"r{len(records):04d}"
        records.append(
            {
                "id": pid,
                "title": f"Improved {phrase} arrangement",
                "abstract": "",
                "grant_date": "2000-01-01",
                "ipc": [f"{sub} 1/00"],
                "cited": [rng.choice(cited_pool)],
                "inventors": ["kim"],
                "assignees": ["AcmeCo"],
            }
        )
    return records


def to_records(raw: list[dict]) -> list[PatentRecord]:
    return [parse_record(json.dumps(r)) for r in raw]


# ---------------------------------------------------------------------------
# Oracles: straight-line reimplementations used only for checking.
# ---------------------------------------------------------------------------


def oracle_field(code_string: str, level: int) -> str:
    head = code_string.strip().upper()
    return head[:3] if level == 3 else head[:4]


def oracle_profiles(raw: list[dict], level: int) -> dict[str, set[str]]:
    """field -> union of cited ids over its member patents."""
    out: dict[str, set[str]] = {}
    for rec in raw:
        fields = {oracle_field(c, level) for c in rec["ipc"]}
        cited = set(rec["cited"]) - {rec["id"]}
        for fld in fields:
            out.setdefault(fld, set()).update(cited)
    return out


def oracle_jaccard(ci: set[str], cj: set[str]) -> float:
    union = ci | cj
    if not union:
        return 0.0
    return len(ci & cj) / len(union)


def oracle_matrix(raw: list[dict], level: int) -> dict[tuple[str, str], float]:
    profiles = oracle_profiles(raw, level)
    fields = sorted(profiles)
    out: dict[tuple[str, str], float] = {}
    for a in fields:
        for b in fields:
            if a == b:
                out[(a, b)] = 1.0 if profiles[a] else 0.0
            else:
                out[(a, b)] = oracle_jaccard(profiles[a], profiles[b])
    return out


def oracle_omega(
    phi: dict[tuple[str, str], float], x: dict[str, float], j: str
) -> float:
    num = sum(phi[(i, j)] * xi for i, xi in x.items() if i != j)
    den = sum(xi for i, xi in x.items() if i != j)
    return num / den


def _oracle_tokens(text: str) -> list[str]:
    return _ORACLE_TOKEN.findall(text.lower())


def _contains_phrase(tokens: list[str], phrase: list[str]) -> bool:
    k = len(phrase)
    return any(tokens[i : i + k] == phrase for i in range(len(tokens) - k + 1))


def oracle_position(
    raw: list[dict], phrases: list[list[str]], level: int
) -> tuple[set[str], dict[str, int]]:
    """Full-scan phrase matching: every phrase must appear contiguously in
    the title or in the abstract of a record."""
    matched: set[str] = set()
    for rec in raw:
        title = _oracle_tokens(rec["title"])
        abstract = _oracle_tokens(rec.get("abstract", ""))
        if all(
            _contains_phrase(title, p) or _contains_phrase(abstract, p) for p in phrases
        ):
            matched.add(rec["id"])
    x: dict[str, int] = {}
    for rec in raw:
        if rec["id"] not in matched:
            continue
        for fld in {oracle_field(c, level) for c in rec["ipc"]}:
            x[fld] = x.get(fld, 0) + 1
    return matched, x
