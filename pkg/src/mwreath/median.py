"""Median graphs: distances, intervals, medians, walls, convex hulls and gates.

Vertex sets are handled internally as Python ``int`` bitmasks (bit ``v`` set
means vertex ``v`` belongs to the set); the public functions accept and return
ordinary sets.  All quantities are exact integers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import InvalidInput, NotConnected, NotConvex, NotMedian, WallNotConvex


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Wall:
    """A hyperplane: a partition of the vertex set into two convex halfspaces."""

    id: int
    side_a: frozenset
    side_b: frozenset
    mask_a: int = field(repr=False, compare=False)
    mask_b: int = field(repr=False, compare=False)

    def separates(self, u: int, v: int) -> bool:
        return bool((self.mask_a >> u) & 1) != bool((self.mask_a >> v) & 1)


class MedianGraph:
    """A finite connected graph whose vertex triples have unique medians.

    Build instances with :func:`verify_median_graph`; the constructor itself
    performs no validation.
    """

    def __init__(self, n: int, edges, dist: np.ndarray, labels=None):
        self.n = n
        self.edges = tuple(edges)
        adj = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        self.dist_array = dist
        self.dist = tuple(tuple(int(d) for d in row) for row in dist)
        self.all_mask = (1 << n) - 1
        self.labels = tuple(labels) if labels is not None else None
        self._interval: dict[tuple[int, int], int] = {}
        self._hull: dict[int, int] = {}
        self._walls = None
        self._sig = None
        self._nbr_mask = tuple(mask_of(a) for a in self.adj)

    def __repr__(self):
        return f"MedianGraph(n={self.n}, edges={len(self.edges)})"

    def index(self, label) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)

    def label(self, v: int):
        return v if self.labels is None else self.labels[v]

    # -- intervals -------------------------------------------------------

    def interval_mask(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        key = (u, v)
        m = self._interval.get(key)
        if m is None:
            d = self.dist
            duv = d[u][v]
            du, dv = d[u], d[v]
            m = 0
            for z in range(self.n):
                if du[z] + dv[z] == duv:
                    m |= 1 << z
            self._interval[key] = m
        return m

    def median_vertex(self, x: int, y: int, z: int) -> int:
        m = self.interval_mask(x, y) & self.interval_mask(y, z) & self.interval_mask(x, z)
        return m.bit_length() - 1

    # -- walls -----------------------------------------------------------

    @property
    def walls(self) -> tuple[Wall, ...]:
        if self._walls is None:
            self._walls = _compute_walls(self)
        return self._walls

    @property
    def signatures(self) -> tuple[int, ...]:
        """Per-vertex bitmask over wall ids: bit ``i`` set iff the vertex lies on side_b of wall ``i``."""
        if self._sig is None:
            sig = [0] * self.n
            for w in self.walls:
                for v in bits(w.mask_b):
                    sig[v] |= 1 << w.id
            self._sig = tuple(sig)
        return self._sig

    def separating_mask(self, u: int, v: int) -> int:
        s = self.signatures
        return s[u] ^ s[v]

    def side_masks(self, mask: int) -> tuple[int, int]:
        """Return (walls with the whole set on side_a, walls with the whole set on side_b)."""
        s = self.signatures
        union, inter = 0, -1
        for v in bits(mask):
            union |= s[v]
            inter &= s[v]
        full = (1 << len(self.walls)) - 1
        return full & ~union, inter & full

    def crossing_mask(self, mask: int) -> int:
        """Walls separating two vertices of the set, i.e. the walls crossing its convex hull."""
        in_a, in_b = self.side_masks(mask)
        full = (1 << len(self.walls)) - 1
        return full & ~(in_a | in_b)

    def mu(self, mask: int) -> int:
        """Counting measure of the walls crossing the convex hull of ``mask``."""
        return popcount(self.crossing_mask(mask))

    # -- convexity -------------------------------------------------------

    def hull_mask(self, mask: int) -> int:
        if mask == 0:
            raise InvalidInput("convex hull of the empty set")
        h = self._hull.get(mask)
        if h is not None:
            return h
        current = mask
        queue = deque(bits(mask))
        while queue:
            x = queue.popleft()
            for y in bits(current):
                extra = self.interval_mask(x, y) & ~current
                if extra:
                    current |= extra
                    queue.extend(bits(extra))
        self._hull[mask] = current
        return current

    def is_convex_mask(self, mask: int) -> bool:
        vs = list(bits(mask))
        for i, x in enumerate(vs):
            for y in vs[i + 1:]:
                if self.interval_mask(x, y) & ~mask:
                    return False
        return True

    def convex(self, vertices) -> "ConvexSet":
        """Wrap an already convex vertex set; raises NotConvex otherwise."""
        m = mask_of(vertices)
        if m == 0 or not self.is_convex_mask(m):
            raise NotConvex(f"{sorted(vertices)} is not a nonempty convex set")
        return ConvexSet(self, m)


class ConvexSet:
    """A nonempty interval-closed vertex set of a fixed median graph."""

    __slots__ = ("graph", "mask", "_crossing")

    def __init__(self, graph: MedianGraph, mask: int):
        self.graph = graph
        self.mask = mask
        self._crossing = None

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    @property
    def crossing(self) -> int:
        """Bitmask of the walls crossing the set."""
        if self._crossing is None:
            self._crossing = self.graph.crossing_mask(self.mask)
        return self._crossing

    def __contains__(self, v: int) -> bool:
        return bool((self.mask >> v) & 1)

    def __len__(self):
        return popcount(self.mask)

    def __iter__(self):
        return bits(self.mask)

    def __eq__(self, other):
        if not isinstance(other, ConvexSet):
            return NotImplemented
        return self.graph is other.graph and self.mask == other.mask

    def __hash__(self):
        return hash(self.mask)

    def __lt__(self, other):
        return sort_key(self.mask) < sort_key(other.mask)

    def __repr__(self):
        return f"ConvexSet({list(self.vertices)})"


def sort_key(mask: int):
    """Canonical order of vertex sets: by size, then by sorted vertex tuple."""
    return (popcount(mask), tuple(bits(mask)))


# ---------------------------------------------------------------------------


def _bfs_distances(n: int, adj) -> np.ndarray:
    dist = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if row[v] < 0:
                    row[v] = row[u] + 1
                    queue.append(v)
    return dist


def _first_bad_triple(dist: np.ndarray):
    n = dist.shape[0]
    # inside[x, y, w] == (w lies on a geodesic from x to y)
    inside = dist[:, None, :] + dist[None, :, :] == dist[:, :, None]
    for x in range(n):
        ix = inside[x]
        # count[y, z] = #{w : w in I(x,y) & I(y,z) & I(x,z)}
        count = np.empty((n, n), dtype=np.int64)
        for y in range(n):
            count[y] = (ix[y][None, :] & inside[y] & ix).sum(axis=1)
        bad = np.argwhere(count != 1)
        if len(bad):
            y, z = bad[0]
            return (x, int(y), int(z)), int(count[y, z])
    return None


def verify_median_graph(num_vertices: int, edges, labels=None) -> MedianGraph:
    """Validate a graph and return it as a :class:`MedianGraph`.

    Raises :class:`NotConnected` or :class:`NotMedian` (carrying the first
    lexicographic triple whose median count differs from one).
    """
    n = int(num_vertices)
    if n < 1:
        raise InvalidInput("a graph needs at least one vertex")
    clean = set()
    for e in edges:
        u, v = (int(e[0]), int(e[1]))
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidInput(f"edge {e} references a vertex outside 0..{n - 1}")
        if u == v:
            raise InvalidInput(f"self-loop at vertex {u}")
        clean.add((min(u, v), max(u, v)))
    edges = sorted(clean)
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = _bfs_distances(n, adj)
    if (dist < 0).any():
        u, v = np.argwhere(dist < 0)[0]
        raise NotConnected(f"no path between vertices {int(u)} and {int(v)}")
    bad = _first_bad_triple(dist)
    if bad is not None:
        raise NotMedian(*bad)
    g = MedianGraph(n, edges, dist, labels)
    g.walls  # noqa: B018 - asserts wall convexity eagerly
    return g


def _compute_walls(g: MedianGraph) -> tuple[Wall, ...]:
    seen: dict[int, int] = {}
    out = []
    d = g.dist
    for u, v in g.edges:
        side_a = 0
        for w in range(g.n):
            if d[w][u] < d[w][v]:
                side_a |= 1 << w
        side_b = g.all_mask & ~side_a
        key = min(side_a, side_b)
        if key in seen:
            continue
        if side_a == 0 or side_b == 0:
            raise WallNotConvex(f"edge ({u},{v}) does not split the vertex set")
        for side in (side_a, side_b):
            if not g.is_convex_mask(side):
                raise WallNotConvex(f"a side of the wall of edge ({u},{v}) is not convex")
        seen[key] = len(out)
        out.append(
            Wall(len(out), frozenset(bits(side_a)), frozenset(bits(side_b)), side_a, side_b)
        )
    return tuple(out)


# -- operations ------------------------------------------------------------


def interval(g: MedianGraph, u: int, v: int) -> frozenset:
    return frozenset(bits(g.interval_mask(u, v)))


def median(g: MedianGraph, x: int, y: int, z: int) -> int:
    return g.median_vertex(x, y, z)


def walls(g: MedianGraph) -> tuple[Wall, ...]:
    return g.walls


def walls_separating(g: MedianGraph, u: int, v: int) -> frozenset:
    """Ids of the walls with ``u`` and ``v`` on opposite sides."""
    return frozenset(bits(g.separating_mask(u, v)))


def convex_hull(g: MedianGraph, vertices) -> ConvexSet:
    """Smallest convex superset, by iterating ``T -> union of I(x, y)`` to a fixpoint."""
    m = vertices.mask if isinstance(vertices, ConvexSet) else mask_of(vertices)
    return ConvexSet(g, g.hull_mask(m))


def gate(g: MedianGraph, C: ConvexSet, x: int) -> int:
    """Projection of ``x`` onto ``C``: the unique closest point of ``C``."""
    row = g.dist[x]
    return min(bits(C.mask), key=lambda p: (row[p], p))


def gate_pair(g: MedianGraph, C1: ConvexSet, C2: ConvexSet) -> tuple[int, int]:
    """A pair ``(x1, x2)`` realising ``d(C1, C2)``, each the gate of the other."""
    d = g.dist
    best = None
    for a in bits(C1.mask):
        row = d[a]
        for b in bits(C2.mask):
            if best is None or row[b] < best[0]:
                best = (row[b], a, b)
    _, a, b = best
    b = gate(g, C2, a)
    return gate(g, C1, b), b


def separating_walls_between(g: MedianGraph, S, T) -> frozenset:
    """Ids of walls with all of ``S`` on one side and all of ``T`` on the other."""
    sa, sb = g.side_masks(S.mask if isinstance(S, ConvexSet) else mask_of(S))
    ta, tb = g.side_masks(T.mask if isinstance(T, ConvexSet) else mask_of(T))
    return frozenset(bits((sa & tb) | (sb & ta)))


def median_closure(g: MedianGraph, vertices) -> frozenset:
    """Closure of a set under ``T -> T + {m(x, y, z) : x, y in T, z in X}``.

    Since ``I(x, y) = {m(x, y, z) : z}`` in a median graph, this yields the
    convex hull through the median operation alone.
    """
    current = set(vertices)
    frontier = list(current)
    while frontier:
        new = set()
        for x in frontier:
            for y in list(current):
                for z in range(g.n):
                    m = g.median_vertex(x, y, z)
                    if m not in current:
                        new.add(m)
        current |= new
        frontier = list(new)
    return frozenset(current)


def median_hull(g: MedianGraph, vertices) -> frozenset:
    """Smallest superset stable under the median operation (iterate ``M(F)``)."""
    current = frozenset(vertices)
    while True:
        nxt = frozenset(
            g.median_vertex(x, y, z) for x in current for y in current for z in current
        )
        if nxt == current:
            return current
        current = nxt
