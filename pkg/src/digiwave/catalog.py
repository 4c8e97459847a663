"""Named digital spaces with their expected properties.

Labelings:

* ``string_disk(k)``: path ``0 - 1 - ... - k-1``.
* ``cycle(m)``: ``i ~ i+1 (mod m)``.
* ``sphereN_min`` / ``sphere0``: join of S^0 copies, antipodes ``(2k, 2k+1)``.
* ``torus16`` / ``klein16``: point ``(i, j)`` of the 4x4 grid is ``4*j + i``;
  ``(i, j)`` touches ``(i+-1, j)``, ``(i, j+-1)``, ``(i+1, j+1)``, ``(i-1, j-1)``.
  For the Klein bottle, crossing from row 3 to row 0 maps column ``i`` to
  ``-i mod 4``.
* ``projective11``: frozen edge table below (flag triangulation of the
  projective plane; 30 edges, 20 triangles).

Every entry is checked against the recognizers the first time it is built.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .graph import Graph, enumerate_cliques, euler_characteristic, graph_from_edges, read_graph
from .topology import (
    is_contractible,
    is_n_manifold,
    is_n_sphere,
    is_orientable,
    minimal_sphere,
)

PROJECTIVE11_EDGES = (
    (0, 1), (0, 2), (0, 5), (0, 7), (0, 8), (0, 10), (1, 2), (1, 3), (1, 4), (1, 5),
    (1, 9), (2, 6), (2, 9), (2, 10), (3, 4), (3, 8), (3, 9), (4, 5), (4, 6), (4, 8),
    (4, 10), (5, 6), (5, 7), (6, 7), (6, 9), (6, 10), (7, 8), (7, 9), (8, 9), (8, 10),
)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    graph: Graph
    kind: str  # "sphere", "manifold" or "disk"
    dimension: int
    n_points: int
    euler: int
    orientable: Optional[bool] = None


def string_disk(k: int) -> Graph:
    if k < 2:
        raise ValueError("string_disk needs k >= 2")
    return graph_from_edges(k, [(i, i + 1) for i in range(k - 1)])


def cycle(m: int) -> Graph:
    if m < 4:
        raise ValueError("a digital 1-sphere cycle needs m >= 4")
    return graph_from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def _grid16(reflect: bool) -> Graph:
    def idx(i: int, j: int) -> int:
        return 4 * (j % 4) + i % 4

    edges = []
    for j in range(4):
        for i in range(4):
            edges.append((idx(i, j), idx(i + 1, j)))
            if j < 3 or not reflect:
                edges.append((idx(i, j), idx(i, j + 1)))
                edges.append((idx(i, j), idx(i + 1, j + 1)))
            else:
                edges.append((idx(i, 3), idx(-i, 0)))
                edges.append((idx(i, 3), idx(-(i + 1), 0)))
    return graph_from_edges(16, edges)


def torus16() -> Graph:
    return _grid16(reflect=False)


def klein16() -> Graph:
    return _grid16(reflect=True)


def projective11() -> Graph:
    return graph_from_edges(11, PROJECTIVE11_EDGES)


_FIXED = {
    "two_point": lambda: (graph_from_edges(2, [(0, 1)]), "disk", 1, None),
    "sphere0": lambda: (minimal_sphere(0), "sphere", 0, None),
    "sphere1_min": lambda: (minimal_sphere(1), "sphere", 1, None),
    "sphere2_min": lambda: (minimal_sphere(2), "sphere", 2, True),
    "sphere3_min": lambda: (minimal_sphere(3), "sphere", 3, None),
    "sphere4_min": lambda: (minimal_sphere(4), "sphere", 4, None),
    "torus16": lambda: (torus16(), "manifold", 2, True),
    "klein16": lambda: (klein16(), "manifold", 2, False),
    "projective11": lambda: (projective11(), "manifold", 2, False),
}

_EULER = {"disk": lambda n: 1, "sphere": lambda n: 1 + (-1) ** n}
_MANIFOLD_EULER = {"torus16": 0, "klein16": 0, "projective11": 1}

_PARAM = re.compile(r"^(string_disk|cycle)\((\d+)\)$")


def names() -> list[str]:
    """Catalog names; parameterized families are listed with a sample argument."""
    return list(_FIXED) + ["string_disk(10)", "cycle(6)"]


def _build(name: str):
    m = _PARAM.match(name.replace(" ", ""))
    if m:
        family, arg = m.group(1), int(m.group(2))
        if family == "cycle":
            return cycle(arg), "sphere", 1, None
        return string_disk(arg), "disk", 1, None
    if name not in _FIXED:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(names())}")
    return _FIXED[name]()


def _verify(entry: CatalogEntry) -> None:
    g = entry.graph
    problems = []
    if euler_characteristic(g) != entry.euler:
        problems.append(f"euler {euler_characteristic(g)} != {entry.euler}")
    if entry.kind == "disk" and not is_contractible(g):
        problems.append("not contractible")
    if entry.kind == "sphere" and not is_n_sphere(g, entry.dimension):
        problems.append(f"not a {entry.dimension}-sphere")
    if entry.kind == "manifold":
        if not is_n_manifold(g, entry.dimension):
            problems.append(f"not a {entry.dimension}-manifold")
        if is_n_sphere(g, entry.dimension):
            problems.append("unexpectedly a sphere")
        counts = enumerate_cliques(g)
        if 3 * counts[2] != 2 * counts[1]:
            problems.append("triangle/edge counts do not close up a surface")
    if entry.orientable is not None and is_orientable(g) != entry.orientable:
        problems.append(f"orientability != {entry.orientable}")
    if problems:
        raise RuntimeError(f"catalog entry {entry.name} failed verification: {'; '.join(problems)}")


@lru_cache(maxsize=None)
def catalog(name: str) -> CatalogEntry:
    """Look up and verify a named digital space, e.g. ``"klein16"`` or ``"cycle(6)"``."""
    graph, kind, dim, orientable = _build(name)
    if kind == "manifold":
        euler = _MANIFOLD_EULER[name]
    else:
        euler = _EULER[kind](dim)
    entry = CatalogEntry(name, graph, kind, dim, graph.n, euler, orientable)
    _verify(entry)
    return entry


def resolve_graph(target: str) -> Graph:
    """A catalog name or a path to a graph text file."""
    if os.path.exists(target):
        return read_graph(target)
    return catalog(target).graph
