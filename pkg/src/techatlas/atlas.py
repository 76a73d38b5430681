"""The technology-space map: field nodes, backbone edges, 2-D layout.

The full proximity graph is near-complete and unreadable, so the map
keeps only a backbone: a maximum-weight spanning forest (which preserves
connectivity wherever the positive-proximity graph is connected) plus
each node's top-k strongest neighbors. Coordinates come from a seeded
force-directed layout that is a pure function of (graph, seed,
iterations).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .corpus import CorpusIndex, canonical_json
from .proximity import ProximityMatrix

REASON_SPANNING_TREE = "spanning-tree"
REASON_TOP_K = "top-k"

LAYOUT_GENERATOR = "pcg64"  # numpy default_rng; part of the determinism contract

DEFAULT_BACKBONE_K = 3
DEFAULT_ITERATIONS = 300
DEFAULT_SEED = 42

_INITIAL_TEMPERATURE = 0.1  # fraction of the unit frame


class AtlasError(Exception):
    pass


@dataclass(frozen=True)
class TechSpaceGraph:
    """Backbone graph over the fields of one level.

    ``edges`` maps lexicographically ordered field pairs to their
    proximity; ``retained_reason`` records why each edge survived
    filtering (spanning-tree edges take precedence over top-k when an
    edge qualifies as both).
    """

    level: int
    nodes: Mapping[str, int]
    edges: Mapping[tuple[str, str], float]
    retained_reason: Mapping[tuple[str, str], str]


@dataclass(frozen=True)
class LayoutCoordinates:
    """Node positions normalized to the unit square."""

    coordinates: Mapping[str, tuple[float, float]]
    seed: int
    iterations: int
    generator: str = LAYOUT_GENERATOR


class _UnionFind:
    def __init__(self, items):
        self.parent = {item: item for item in items}

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:  # path compression
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def backbone_filter(matrix: ProximityMatrix, k: int = DEFAULT_BACKBONE_K) -> dict[tuple[str, str], str]:
    """Edges kept on the map, with their retention reason.

    Union of (a) a maximum-weight spanning forest over the positive-
    proximity graph (Kruskal, ties broken by lexicographic pair) and
    (b) each node's k strongest positive neighbors (ties by code).
    """
    if k < 1:
        raise AtlasError("backbone k must be >= 1")
    fields = matrix.fields
    n = len(fields)
    positive = [
        (fields[i], fields[j], float(matrix.phi[i, j]))
        for i in range(n)
        for j in range(i + 1, n)
        if matrix.phi[i, j] > 0.0
    ]

    retained: dict[tuple[str, str], str] = {}
    forest = _UnionFind(fields)
    for a, b, w in sorted(positive, key=lambda e: (-e[2], e[0], e[1])):
        if forest.union(a, b):
            retained[(a, b)] = REASON_SPANNING_TREE

    neighbors: dict[str, list[tuple[float, str]]] = {f: [] for f in fields}
    for a, b, w in positive:
        neighbors[a].append((w, b))
        neighbors[b].append((w, a))
    for fld in fields:
        ranked = sorted(neighbors[fld], key=lambda item: (-item[0], item[1]))
        for _, other in ranked[:k]:
            pair = (fld, other) if fld < other else (other, fld)
            retained.setdefault(pair, REASON_TOP_K)

    return dict(sorted(retained.items()))


def build_graph(
    index: CorpusIndex, matrix: ProximityMatrix, k: int = DEFAULT_BACKBONE_K
) -> TechSpaceGraph:
    """Map graph for one level: every field as a node sized by patent
    count, backbone-filtered edges weighted by proximity."""
    level = matrix.level
    index_fields = index.fields_at_level[level]
    if set(matrix.fields) != set(index_fields):
        raise AtlasError(f"index and matrix disagree on level-{level} fields")
    nodes = {fld: len(index.members(level, fld)) for fld in sorted(index_fields)}
    reasons = backbone_filter(matrix, k=k)
    edges = {pair: matrix.value(*pair) for pair in reasons}
    return TechSpaceGraph(level=level, nodes=nodes, edges=edges, retained_reason=reasons)


def _components(nodes: list[str], edges) -> list[list[str]]:
    forest = _UnionFind(nodes)
    for a, b in edges:
        forest.union(a, b)
    groups: dict[str, list[str]] = {}
    for node in nodes:
        groups.setdefault(forest.find(node), []).append(node)
    return sorted(groups.values(), key=lambda grp: grp[0])  # nodes already sorted


def compute_layout(
    graph: TechSpaceGraph,
    seed: int = DEFAULT_SEED,
    iterations: int = DEFAULT_ITERATIONS,
) -> LayoutCoordinates:
    """Force-directed layout, reproducible bit-for-bit on one platform.

    Initial positions are drawn from a seeded PCG64 generator inside a
    per-component grid cell (components can never start on top of each
    other); then standard spring iterations run with repulsion k^2/d,
    attraction weighted by edge proximity (phi * d^2 / k), and a linear
    cooling schedule. Final coordinates are min-max normalized to the
    unit square, with degenerate axes centered at 0.5.
    """
    if iterations < 1:
        raise AtlasError("iterations must be >= 1")
    nodes = sorted(graph.nodes)
    n = len(nodes)
    if n == 0:
        return LayoutCoordinates(coordinates={}, seed=seed, iterations=iterations)

    node_pos = {node: i for i, node in enumerate(nodes)}
    comps = _components(nodes, graph.edges)
    grid = math.ceil(math.sqrt(len(comps)))
    cell = 1.0 / grid
    cell_of: dict[str, tuple[float, float]] = {}
    for c, comp in enumerate(comps):
        origin = ((c % grid) * cell, (c // grid) * cell)
        for node in comp:
            cell_of[node] = origin

    rng = np.random.default_rng(seed)
    pos = np.empty((n, 2), dtype=np.float64)
    for i, node in enumerate(nodes):  # canonical draw order
        ox, oy = cell_of[node]
        u, v = rng.random(2)
        pos[i] = (ox + u * cell, oy + v * cell)

    kappa = math.sqrt(1.0 / n)  # unit-square area
    edge_a = np.fromiter((node_pos[a] for a, b in graph.edges), dtype=np.int64)
    edge_b = np.fromiter((node_pos[b] for a, b in graph.edges), dtype=np.int64)
    weights = np.fromiter(graph.edges.values(), dtype=np.float64)

    # Escape directions for exactly-coincident pairs (frame clamping can
    # pile nodes onto one corner, where delta = 0 gives repulsion nothing
    # to act on). Antisymmetric and index-derived, so still deterministic.
    order = np.arange(n)
    lo = np.minimum(order[:, None], order[None, :])
    hi = np.maximum(order[:, None], order[None, :])
    angle = 2.0 * np.pi * ((lo * 31 + hi * 17) % 64) / 64.0
    pair_sign = np.sign(order[:, None] - order[None, :]).astype(np.float64)
    escape = np.stack([pair_sign * np.cos(angle), pair_sign * np.sin(angle)], axis=2)

    for it in range(iterations):
        temperature = _INITIAL_TEMPERATURE * (1.0 - it / iterations)
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((delta**2).sum(axis=2))
        np.fill_diagonal(dist, 1.0)
        coincident = dist <= 1e-9
        dist = np.maximum(dist, 1e-12)
        repulse = kappa * kappa / dist
        np.fill_diagonal(repulse, 0.0)
        direction = np.divide(delta, dist[:, :, None], out=delta)
        if coincident.any():
            direction = np.where(coincident[:, :, None], escape, direction)
        direction *= repulse[:, :, None]
        disp = direction.sum(axis=1)

        if edge_a.size:
            dvec = pos[edge_a] - pos[edge_b]
            d = np.maximum(np.sqrt((dvec**2).sum(axis=1)), 1e-12)
            pull = (weights * d / kappa)[:, None] * dvec  # |pull| = phi * d^2 / kappa
            np.subtract.at(disp, edge_a, pull)
            np.add.at(disp, edge_b, pull)

        length = np.maximum(np.sqrt((disp**2).sum(axis=1)), 1e-12)
        step = disp / length[:, None] * np.minimum(length, temperature)[:, None]
        pos = np.clip(pos + step, 0.0, 1.0)

    low, high = pos.min(axis=0), pos.max(axis=0)
    span = high - low
    for axis in range(2):
        if span[axis] > 0:
            pos[:, axis] = (pos[:, axis] - low[axis]) / span[axis]
        else:
            pos[:, axis] = 0.5

    coords = {node: (float(pos[i, 0]), float(pos[i, 1])) for i, node in enumerate(nodes)}
    return LayoutCoordinates(coordinates=coords, seed=seed, iterations=iterations)


def map_payload(graph: TechSpaceGraph, layout: LayoutCoordinates) -> dict:
    """The map file / map endpoint body: nodes as [code, patent_count, x, y],
    edges as [a, b, phi, reason]."""
    return {
        "level": graph.level,
        "seed": layout.seed,
        "iterations": layout.iterations,
        "generator": layout.generator,
        "nodes": [
            [code, graph.nodes[code], *layout.coordinates[code]] for code in sorted(graph.nodes)
        ],
        "edges": [
            [a, b, graph.edges[(a, b)], graph.retained_reason[(a, b)]]
            for a, b in sorted(graph.edges)
        ],
    }


def export_map(graph: TechSpaceGraph, layout: LayoutCoordinates) -> str:
    return canonical_json(map_payload(graph, layout)) + "\n"


def parse_map_export(payload: dict) -> tuple[TechSpaceGraph, LayoutCoordinates]:
    """Rebuild graph and layout from a map payload."""
    nodes = {code: int(count) for code, count, _, _ in payload["nodes"]}
    coords = {code: (float(x), float(y)) for code, _, x, y in payload["nodes"]}
    edges: dict[tuple[str, str], float] = {}
    reasons: dict[tuple[str, str], str] = {}
    for a, b, phi, reason in payload["edges"]:
        edges[(a, b)] = float(phi)
        reasons[(a, b)] = reason
    graph = TechSpaceGraph(
        level=int(payload["level"]), nodes=nodes, edges=edges, retained_reason=reasons
    )
    layout = LayoutCoordinates(
        coordinates=coords,
        seed=int(payload["seed"]),
        iterations=int(payload["iterations"]),
        generator=payload["generator"],
    )
    return graph, layout
