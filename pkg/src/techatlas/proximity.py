"""Citation-based knowledge proximity between technology fields.

The knowledge base of a field is approximated by the set of patents its
members cite. Pairwise field proximity is the Jaccard index of those
cited sets; a whole target domain's proximity to a candidate field is
the footprint-weighted mean of the pairwise values. Both quantities
live in [0, 1]; distance is their opposite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .corpus import CorpusIndex


class ProximityError(Exception):
    """Invalid proximity query (unknown field, empty target domain)."""


@dataclass(frozen=True)
class ClassCitationProfile:
    """Per-field cited-patent sets at one level.

    Each field's set is the exact union of ``cited_ids`` over the
    field's member patents; dangling references count like any other
    cited id.
    """

    level: int
    profiles: Mapping[str, frozenset[str]]


def citation_profile(index: CorpusIndex, level: int) -> ClassCitationProfile:
    """Cited-id set for every field present at *level*."""
    profiles: dict[str, frozenset[str]] = {}
    for fld in sorted(index.fields_at_level[level]):
        cited: set[str] = set()
        for pid in index.members(level, fld):
            cited.update(index.records[pid].cited_ids)
        profiles[fld] = frozenset(cited)
    return ClassCitationProfile(level=level, profiles=profiles)


def knowledge_proximity(ci: frozenset[str] | set[str], cj: frozenset[str] | set[str]) -> float:
    """Jaccard index |ci ∩ cj| / |ci ∪ cj|, with 0/0 defined as 0."""
    union = len(ci | cj)
    if union == 0:
        return 0.0
    return len(ci & cj) / union


@dataclass(frozen=True)
class ProximityMatrix:
    """Dense symmetric field-by-field proximity at one level.

    ``fields`` is lexicographically sorted; ``phi[i, j]`` is the
    proximity between ``fields[i]`` and ``fields[j]``. The diagonal is
    1 for fields with a non-empty cited set and 0 for ``empty_fields``
    (a flag value, never consumed by :func:`domain_proximity`).
    """

    level: int
    fields: tuple[str, ...]
    phi: np.ndarray
    empty_fields: frozenset[str]
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {f: i for i, f in enumerate(self.fields)})

    def index_of(self, fld: str) -> int:
        try:
            return self._index[fld]
        except KeyError:
            raise ProximityError(f"unknown field {fld!r} at level {self.level}") from None

    def value(self, a: str, b: str) -> float:
        return float(self.phi[self.index_of(a), self.index_of(b)])


def build_proximity_matrix(profile: ClassCitationProfile) -> ProximityMatrix:
    """All pairwise proximities for the fields of *profile*.

    Cited ids are interned to integers and each field's set becomes a
    sorted unique array, so every intersection is an exact merge of
    sorted integer arrays: deterministic regardless of build order.
    """
    fields = tuple(sorted(profile.profiles))
    n = len(fields)
    phi = np.zeros((n, n), dtype=np.float64)

    all_ids = sorted(set().union(*profile.profiles.values())) if fields else []
    intern = {cid: k for k, cid in enumerate(all_ids)}
    arrays = [
        np.sort(np.fromiter((intern[c] for c in profile.profiles[f]), dtype=np.int64))
        for f in fields
    ]

    empty = frozenset(f for f, arr in zip(fields, arrays) if arr.size == 0)
    for i in range(n):
        phi[i, i] = 0.0 if fields[i] in empty else 1.0
        for j in range(i + 1, n):
            a, b = arrays[i], arrays[j]
            inter = np.intersect1d(a, b, assume_unique=True).size
            union = a.size + b.size - inter
            value = inter / union if union else 0.0
            phi[i, j] = value
            phi[j, i] = value

    return ProximityMatrix(level=profile.level, fields=fields, phi=phi, empty_fields=empty)


def domain_proximity(matrix: ProximityMatrix, x: Mapping[str, float], j: str) -> float:
    """Footprint-weighted mean proximity of field *j* to a target domain.

    *x* maps fields to non-negative patent counts (the domain footprint);
    the result is sum(phi[i,j] * x_i) / sum(x_i) over i != j. The i == j
    term is excluded from both sums even when x_j > 0, so the value is a
    pure cross-field proximity.

    Integral footprints are reduced by their gcd before accumulating.
    The value is unchanged mathematically, and it makes the result
    bit-identical under any integer scaling of x (duplicating every
    matched patent may never reorder a ranking).
    """
    unknown = set(x) - set(matrix.fields)
    if unknown:
        raise ProximityError(f"unknown field(s) in footprint: {sorted(unknown)}")
    weights: dict[str, float] = {}
    for fld, weight in x.items():
        if weight < 0:
            raise ProximityError(f"negative count for field {fld!r}")
        if weight != 0:
            weights[fld] = weight
    if weights and all(float(w).is_integer() for w in weights.values()):
        g = math.gcd(*(int(w) for w in weights.values()))
        if g > 1:
            weights = {fld: int(w) // g for fld, w in weights.items()}

    col = matrix.index_of(j)
    numerator = 0.0
    denominator = 0.0
    for fld in matrix.fields:  # fixed order: reproducible float summation
        weight = weights.get(fld)
        if weight is None or fld == j:
            continue
        numerator += matrix.phi[matrix.index_of(fld), col] * weight
        denominator += weight
    if denominator == 0:
        raise ProximityError(f"target domain empty relative to {j}")
    return numerator / denominator


def export_matrix(matrix: ProximityMatrix) -> str:
    """Canonical text form: header of field codes, then lower-triangular
    rows at 15 significant digits. Two identical builds diff byte-equal."""
    lines = [" ".join(matrix.fields)]
    for i in range(len(matrix.fields)):
        lines.append(" ".join(f"{matrix.phi[i, j]:.15g}" for j in range(i + 1)))
    return "\n".join(lines) + "\n"


def parse_matrix_export(text: str, level: int) -> ProximityMatrix:
    """Inverse of :func:`export_matrix` (modulo the 15-digit rounding,
    which round-trips to identical bytes)."""
    lines = text.splitlines()
    header = lines[0].split() if lines and lines[0].strip() else []
    fields = tuple(header)
    n = len(fields)
    phi = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        row = [float(v) for v in lines[1 + i].split()]
        if len(row) != i + 1:
            raise ProximityError(f"malformed matrix row {i}: expected {i + 1} values")
        for j, value in enumerate(row):
            phi[i, j] = value
            phi[j, i] = value
    empty = frozenset(fields[i] for i in range(n) if phi[i, i] == 0.0)
    return ProximityMatrix(level=level, fields=fields, phi=phi, empty_fields=empty)
