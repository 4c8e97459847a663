"""Immutable simple graphs used as digital spaces.

Points are dense 0-based integers. Every operation that would "mutate" a
graph (deleting a point, taking an induced subgraph, joining) returns a new
graph whose points are relabeled densely, preserving the relative order of
the original identifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class Graph:
    """A finite simple undirected graph on points ``0..n-1``.

    Use :func:`graph_from_edges` to build one from arbitrary pair lists; the
    constructor expects normalized input (sorted ``u < v`` pairs, no repeats).
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("point count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(self.n)]
        prev = None
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u}, {v}) is not a normalized pair on {self.n} points")
            if prev is not None and (u, v) <= prev:
                raise ValueError("edges must be strictly increasing")
            prev = (u, v)
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "adjacency", tuple(frozenset(a) for a in adj))

    @property
    def points(self) -> range:
        return range(self.n)

    def __len__(self) -> int:
        return self.n

    def __contains__(self, v: object) -> bool:
        return isinstance(v, (int, np.integer)) and 0 <= v < self.n

    def neighbors(self, v: int) -> frozenset[int]:
        _check_point(self, v)
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors(u)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, n_edges={len(self.edges)})"


def _check_point(g: Graph, v: int) -> None:
    if v not in g:
        raise KeyError(f"point {v} is not in a graph with {g.n} points")


def graph_from_edges(n_points: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph, dropping repeats and orientation of the given pairs.

    Self-loops are discarded; an endpoint outside ``[0, n_points)`` raises
    ``ValueError``.
    """
    norm = set()
    for pair in edges:
        u, v = (int(x) for x in pair)
        for x in (u, v):
            if not 0 <= x < n_points:
                raise ValueError(f"endpoint {x} out of range for {n_points} points")
        if u != v:
            norm.add((min(u, v), max(u, v)))
    return Graph(n_points, tuple(sorted(norm)))


def induced_subgraph(g: Graph, points: Iterable[int]) -> Graph:
    """Induced subgraph on ``points``, relabeled ``0..k-1`` in ascending order."""
    keep = sorted(set(points))
    for v in keep:
        _check_point(g, v)
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    return Graph(len(keep), tuple(sorted(edges)))


def delete_point(g: Graph, v: int) -> Graph:
    _check_point(g, v)
    return induced_subgraph(g, (p for p in g.points if p != v))


def rim(g: Graph, v: int) -> Graph:
    """The rim (neighborhood) of ``v``: induced subgraph on its neighbors."""
    return induced_subgraph(g, g.neighbors(v))


def ball(g: Graph, v: int) -> Graph:
    """The ball of ``v``: induced subgraph on ``v`` and its neighbors."""
    return induced_subgraph(g, g.neighbors(v) | {v})


def join(g: Graph, h: Graph) -> Graph:
    """Join of two graphs: ``h``'s points are shifted by ``len(g)``."""
    k = g.n
    edges = list(g.edges)
    edges += [(u + k, v + k) for u, v in h.edges]
    edges += [(u, v + k) for u in range(g.n) for v in range(h.n)]
    return Graph(g.n + h.n, tuple(sorted(edges)))


def _clique_counts(adjacency: Sequence[frozenset[int]], points: Iterable[int]) -> list[int]:
    # Each clique is generated once, extended only by larger identifiers.
    counts: list[int] = []
    pts = frozenset(points)

    def extend(size: int, candidates: frozenset[int]) -> None:
        if len(counts) < size:
            counts.append(0)
        counts[size - 1] += 1
        for w in candidates:
            extend(size + 1, frozenset(x for x in candidates & adjacency[w] if x > w))

    for v in sorted(pts):
        extend(1, frozenset(x for x in adjacency[v] & pts if x > v))
    return counts


def enumerate_cliques(g: Graph) -> list[int]:
    """Number of complete subgraphs of each size; entry ``k-1`` counts ``k``-cliques."""
    return _clique_counts(g.adjacency, g.points)


def euler_characteristic(g: Graph) -> int:
    """Alternating sum of clique counts (vertices - edges + triangles - ...)."""
    return sum((-1) ** k * c for k, c in enumerate(enumerate_cliques(g)))


def _component_of(adjacency: Sequence[frozenset[int]], points: frozenset[int], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adjacency[u] & points:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        raise ValueError("connectivity of the empty graph is undefined")
    return len(_component_of(g.adjacency, frozenset(g.points), 0)) == g.n


def format_graph(g: Graph) -> str:
    """Serialize to the text format: ``points N`` then one ``u v`` line per edge."""
    lines = [f"points {g.n}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "points":
                raise ValueError(f"line {lineno}: expected 'points N', got {raw!r}")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise ValueError("missing 'points N' header")
    return graph_from_edges(n, edges)


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_graph(g))


def point_function(g: Graph, values) -> np.ndarray:
    """Validate ``values`` as one real per point of ``g``; returns a read-only float array."""
    arr = np.array(values, dtype=float)
    if arr.shape != (g.n,):
        raise ValueError(f"expected {g.n} values, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr
