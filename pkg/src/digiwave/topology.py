"""Contractibility, simple points, digital spheres and manifolds.

All recognizers work on subsets of a fixed parent graph: a rim or a
point-deleted subgraph is just a smaller frozenset of the parent's point
identifiers. Memo tables are keyed on those subsets, which is exact (two
equal subsets of the same parent induce the same labeled graph) and avoids
any canonical-labeling cost.

Exact contractibility is exponential in the worst case. The search is
ordered as:

1. greedy deletion of simple points, lowest identifier first (sound);
2. necessary conditions that refute cheaply: connectivity and Euler
   characteristic 1 (deleting a simple point preserves the characteristic);
3. the full recursive search, refused above ``max_points`` points.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

from .graph import Graph, _clique_counts, _component_of, induced_subgraph, join, graph_from_edges

DEFAULT_MAX_POINTS = 16


class SizeLimitExceeded(ValueError):
    """Raised when exact contractibility would need a search above the size cap."""


class _Space:
    """Subset queries against one parent graph, with per-instance memo tables."""

    def __init__(self, g: Graph, max_points: int = DEFAULT_MAX_POINTS):
        self.adj = g.adjacency
        self.max_points = max_points
        self._contractible: dict[frozenset[int], bool] = {}
        self._sphere: dict[tuple[frozenset[int], int], bool] = {}

    def rim(self, s: frozenset[int], v: int) -> frozenset[int]:
        return self.adj[v] & s

    def connected(self, s: frozenset[int]) -> bool:
        if not s:
            return False
        return len(_component_of(self.adj, s, min(s))) == len(s)

    def euler(self, s: frozenset[int]) -> int:
        return sum((-1) ** k * c for k, c in enumerate(_clique_counts(self.adj, s)))

    def is_simple(self, s: frozenset[int], v: int) -> bool:
        return self.contractible(self.rim(s, v))

    def reduce(self, s: frozenset[int]) -> tuple[frozenset[int], list[int]]:
        """Delete simple points, lowest identifier first, until none is left."""
        order = []
        while len(s) > 1:
            for v in sorted(s):
                if self.is_simple(s, v):
                    s = s - {v}
                    order.append(v)
                    break
            else:
                break
        return s, order

    def contractible(self, s: frozenset[int]) -> bool:
        if len(s) <= 1:
            return len(s) == 1
        hit = self._contractible.get(s)
        if hit is not None:
            return hit
        result = self._contractible_uncached(s)
        self._contractible[s] = result
        return result

    def _contractible_uncached(self, s: frozenset[int]) -> bool:
        if not self.connected(s):
            return False
        residual, _ = self.reduce(s)
        if len(residual) == 1:
            return True
        if self.euler(s) != 1:
            return False
        if len(s) > self.max_points:
            raise SizeLimitExceeded(
                f"exact contractibility needed on {len(s)} points (cap {self.max_points})"
            )
        for v in sorted(s):
            if self.is_simple(s, v) and self.contractible(s - {v}):
                return True
        return False

    def sphere(self, s: frozenset[int], n: int) -> bool:
        key = (s, n)
        hit = self._sphere.get(key)
        if hit is not None:
            return hit
        result = self._sphere_uncached(s, n)
        self._sphere[key] = result
        return result

    def _sphere_uncached(self, s: frozenset[int], n: int) -> bool:
        if n == 0:
            if len(s) != 2:
                return False
            a, b = sorted(s)
            return b not in self.adj[a]
        # a digital n-sphere has at least 2(n+1) points
        if len(s) < 2 * (n + 1) or not self.connected(s):
            return False
        if not all(self.sphere(self.rim(s, v), n - 1) for v in sorted(s)):
            return False
        return all(self.contractible(s - {v}) for v in sorted(s))


def _full(g: Graph) -> frozenset[int]:
    return frozenset(g.points)


def is_contractible(g: Graph, max_points: int = DEFAULT_MAX_POINTS) -> bool:
    """Recursive contractibility: one point, or a point with contractible rim
    whose deletion leaves a contractible graph."""
    if g.n == 0:
        raise ValueError("contractibility of the empty graph is undefined")
    return _Space(g, max_points).contractible(_full(g))


def is_simple(g: Graph, v: int, max_points: int = DEFAULT_MAX_POINTS) -> bool:
    """True iff the rim of ``v`` is contractible."""
    g.neighbors(v)
    return _Space(g, max_points).is_simple(_full(g), v)


def simple_point_sequence(g: Graph, max_points: int = DEFAULT_MAX_POINTS) -> list[int]:
    """Identifiers (in ``g``'s labeling) deleted by :func:`simple_point_reduction`, in order."""
    _, order = _Space(g, max_points).reduce(_full(g))
    return order


def simple_point_reduction(g: Graph, max_points: int = DEFAULT_MAX_POINTS) -> Graph:
    """Repeatedly delete the lowest-numbered simple point; return what is left."""
    if g.n == 0:
        raise ValueError("cannot reduce the empty graph")
    residual, _ = _Space(g, max_points).reduce(_full(g))
    return induced_subgraph(g, residual)


def is_n_sphere(g: Graph, n: int, max_points: int = DEFAULT_MAX_POINTS) -> bool:
    if n < 0:
        raise ValueError("sphere dimension must be non-negative")
    return _Space(g, max_points).sphere(_full(g), n)


def is_n_manifold(g: Graph, n: int, max_points: int = DEFAULT_MAX_POINTS) -> bool:
    """Connected graph whose every rim is an (n-1)-sphere; defined for n >= 2."""
    if n < 2:
        raise ValueError("manifold recognition is defined for dimension n >= 2")
    space = _Space(g, max_points)
    s = _full(g)
    if not space.connected(s):
        return False
    return all(space.sphere(space.rim(s, v), n - 1) for v in g.points)


def minimal_sphere(n: int) -> Graph:
    """Join of n+1 copies of S^0; antipodal pairs are ``(2k, 2k+1)``."""
    if n < 0:
        raise ValueError("sphere dimension must be non-negative")
    s0 = graph_from_edges(2, [])
    g = s0
    for _ in range(n):
        g = join(g, s0)
    return g


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    return [
        (a, b, c)
        for a in g.points
        for b in sorted(g.adjacency[a])
        if b > a
        for c in sorted(g.adjacency[a] & g.adjacency[b])
        if c > b
    ]


def is_orientable(g: Graph, max_points: int = DEFAULT_MAX_POINTS) -> bool:
    """Orientability of a digital 2-manifold via triangle orientation propagation.

    Each triangle gets a sign relative to its sorted vertex order; across a
    shared edge the two triangles must induce opposite directions on it.
    """
    if not is_n_manifold(g, 2, max_points):
        raise ValueError("orientability is only defined here for digital 2-manifolds")
    tris = triangles(g)
    incidence: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for t, (a, b, c) in enumerate(tris):
        # boundary of +[a,b,c] traverses a->b, b->c, c->a
        for x, y in ((a, b), (b, c), (c, a)):
            incidence[(min(x, y), max(x, y))].append((t, 1 if x < y else -1))
    for edge, inc in incidence.items():
        if len(inc) != 2:
            raise ValueError(f"edge {edge} lies on {len(inc)} triangles, expected 2")

    orientation: list[Optional[int]] = [None] * len(tris)
    for start in range(len(tris)):
        if orientation[start] is not None:
            continue
        orientation[start] = 1
        stack = [start]
        while stack:
            t = stack.pop()
            a, b, c = tris[t]
            for x, y in ((a, b), (b, c), (c, a)):
                (t1, s1), (t2, s2) = incidence[(min(x, y), max(x, y))]
                (other, s_other), s_self = ((t2, s2), s1) if t1 == t else ((t1, s1), s2)
                need = -orientation[t] * s_self * s_other
                if orientation[other] is None:
                    orientation[other] = need
                    stack.append(other)
                elif orientation[other] != need:
                    return False
    return True


@dataclass(frozen=True)
class TopologyVerdict:
    """Classification of a graph.

    ``kind`` is one of ``"contractible"``, ``"sphere"``, ``"manifold"`` or
    ``"none"``; ``dimension`` is set for spheres and manifolds. A sphere of
    dimension n >= 2 is also a manifold of that dimension (every rim is an
    (n-1)-sphere), which :attr:`is_manifold` reflects.
    """

    kind: str
    dimension: Optional[int] = None
    witness: tuple = ()

    @property
    def is_manifold(self) -> bool:
        return self.kind == "manifold" or (self.kind == "sphere" and (self.dimension or 0) >= 1)

    def __str__(self) -> str:
        if self.dimension is None:
            return self.kind
        return f"{self.kind}({self.dimension})"


def classify(g: Graph, max_dim: int = 4, max_points: int = DEFAULT_MAX_POINTS) -> TopologyVerdict:
    """Contractible, n-sphere, n-manifold (n <= ``max_dim``) or none.

    The witness is the simple-point deletion order for contractible graphs
    and the residual point set otherwise.
    """
    space = _Space(g, max_points)
    s = _full(g)
    residual, order = space.reduce(s)
    if space.contractible(s):
        return TopologyVerdict("contractible", None, tuple(order))
    for n in range(max_dim + 1):
        if space.sphere(s, n):
            return TopologyVerdict("sphere", n)
    if space.connected(s):
        for n in range(2, max_dim + 1):
            if all(space.sphere(space.rim(s, v), n - 1) for v in sorted(s)):
                return TopologyVerdict("manifold", n)
    return TopologyVerdict("none", None, tuple(sorted(residual)))
