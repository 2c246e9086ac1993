"""Brute-force oracles.

Nothing here calls ``delta``, ``f_distance``, ``grid_delta`` or ``tc``: the
oracles work from graph adjacency, plain set operations and breadth-first
search, so they can be used to validate the closed formulas.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover

    def njit(**kwargs):
        return lambda fn: fn

from .errors import BoundExceeded, TooLarge


def bfs_oracle(neighbors, source, radius=None, max_vertices: int = 1_000_000) -> dict:
    """Exact shortest-path distances from ``source`` under ``neighbors``.

    ``radius`` stops the search at that depth.  More than ``max_vertices``
    discovered vertices raises :class:`BoundExceeded`.
    """
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        d = dist[v]
        if radius is not None and d >= radius:
            continue
        for w in neighbors(v):
            if w not in dist:
                dist[w] = d + 1
                if len(dist) > max_vertices:
                    raise BoundExceeded(f"BFS discovered more than {max_vertices} vertices")
                queue.append(w)
    return dist


# -- plain graphs ------------------------------------------------------------


def adjacency(n: int, edges) -> list[list[int]]:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def distance_matrix(n: int, edges) -> list[list[int]]:
    """All-pairs BFS distances; ``-1`` for unreachable pairs."""
    adj = adjacency(n, edges)
    out = []
    for s in range(n):
        d = bfs_oracle(lambda v: adj[v], s)
        out.append([d.get(t, -1) for t in range(n)])
    return out


def interval(dist, u: int, v: int) -> frozenset:
    n = len(dist)
    return frozenset(z for z in range(n) if dist[u][z] + dist[z][v] == dist[u][v])


def median_candidates(dist, x: int, y: int, z: int) -> list[int]:
    return sorted(interval(dist, x, y) & interval(dist, y, z) & interval(dist, x, z))


def is_median(n: int, edges) -> bool:
    dist = distance_matrix(n, edges)
    if any(d < 0 for row in dist for d in row):
        return False
    return all(
        len(median_candidates(dist, x, y, z)) == 1
        for x, y, z in itertools.combinations_with_replacement(range(n), 3)
    )


def is_convex(dist, S) -> bool:
    S = frozenset(S)
    return all(interval(dist, u, v) <= S for u in S for v in S)


def convex_sets(dist, max_vertices: int = 12) -> list[frozenset]:
    """Every nonempty convex vertex set, by scanning all subsets."""
    n = len(dist)
    if n > max_vertices:
        raise TooLarge(f"subset scan over {n} vertices")
    intervals = [[interval(dist, u, v) for v in range(n)] for u in range(n)]
    out = []
    for r in range(1, n + 1):
        for S in itertools.combinations(range(n), r):
            s = frozenset(S)
            if all(intervals[u][v] <= s for u in S for v in S):
                out.append(s)
    return out


def hull_by_scan(dist, S, convex=None) -> frozenset:
    """Intersection of every convex superset of ``S``."""
    convex = convex_sets(dist) if convex is None else convex
    out = frozenset(range(len(dist)))
    S = frozenset(S)
    for C in convex:
        if S <= C:
            out &= C
    return out


def median_closure_hull(dist, S) -> frozenset:
    """Fixpoint of ``T -> T u {m(x, y, z) : x, y in T, z any vertex}``."""
    n = len(dist)
    T = set(S)
    while True:
        new = set(T)
        for x, y in itertools.combinations(sorted(T), 2):
            for z in range(n):
                m = median_candidates(dist, x, y, z)
                new.add(m[0])
        if new == T:
            return frozenset(T)
        T = new


def ternary_median_hull(dist, S) -> frozenset:
    """Fixpoint of ``T -> T u {m(x, y, z) : x, y, z in T}``."""
    T = set(S)
    while True:
        new = set(T)
        for x, y, z in itertools.combinations(sorted(T), 3):
            new.add(median_candidates(dist, x, y, z)[0])
        if new == T:
            return frozenset(T)
        T = new


def theta_classes(n: int, edges) -> list[list[tuple]]:
    """Djokovic-Winkler classes: ``uv ~ xy`` iff ``d(u,x) + d(v,y) != d(u,y) + d(v,x)``."""
    dist = distance_matrix(n, edges)
    edges = [tuple(e) for e in edges]
    parent = list(range(len(edges)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, (u, v) in enumerate(edges):
        for j in range(i + 1, len(edges)):
            x, y = edges[j]
            if dist[u][x] + dist[v][y] != dist[u][y] + dist[v][x]:
                parent[find(i)] = find(j)
    classes = {}
    for i, e in enumerate(edges):
        classes.setdefault(find(i), []).append(e)
    return list(classes.values())


def classes_on_geodesic(n: int, edges, u: int, v: int) -> int:
    """Number of distinct Djokovic-Winkler classes met by one shortest u-v path."""
    adj = adjacency(n, edges)
    dist = distance_matrix(n, edges)
    cls = {}
    for k, members in enumerate(theta_classes(n, edges)):
        for a, b in members:
            cls[(a, b)] = cls[(b, a)] = k
    seen = set()
    x = u
    while x != v:
        nxt = min(w for w in adj[x] if dist[w][v] == dist[x][v] - 1)
        seen.add(cls[(x, nxt)])
        x = nxt
    return len(seen)


# -- wreaths -------------------------------------------------------------------


def wreath_graph(x_n: int, x_edges, y_n: int, y_edges, x0: int = 0):
    """Vertices and adjacency of the wreath graph, built from elementary steps.

    A wreath is ``(base frozenset, lamp tuple over Y)``.  Two wreaths are
    adjacent when they share lamps and one base is covered by the other in the
    containment order of convex sets, or when they share a base and the lamps
    differ at one base point by an edge of X.
    """
    y_dist = distance_matrix(y_n, y_edges)
    bases = convex_sets(y_dist)
    base_set = set(bases)
    covers = {C: [] for C in bases}
    for C in bases:
        for D in bases:
            if C < D and not any(C < E < D for E in base_set if len(C) < len(E) < len(D)):
                covers[C].append(D)
                covers[D].append(C)
    x_adj = adjacency(x_n, x_edges)
    lamps = list(itertools.product(range(x_n), repeat=y_n))
    vertices = [(C, lam) for C in bases for lam in lamps]

    def neighbors(w):
        C, lam = w
        out = [(D, lam) for D in covers[C]]
        for y in C:
            for x in x_adj[lam[y]]:
                out.append((C, lam[:y] + (x,) + lam[y + 1:]))
        return out

    return vertices, neighbors


def all_pairs(vertices, neighbors) -> np.ndarray:
    index = {v: i for i, v in enumerate(vertices)}
    out = np.full((len(vertices), len(vertices)), -1, dtype=np.int64)
    for i, v in enumerate(vertices):
        for w, d in bfs_oracle(neighbors, v).items():
            out[i, index[w]] = d
    return out


# -- lamplighter -----------------------------------------------------------------


def box_intervals(lo: int, hi: int) -> list[tuple]:
    return [(a, b) for a in range(lo, hi + 1) for b in range(a, hi + 1)]


def box_rectangles(lo: int = -3, hi: int = 3) -> list[tuple]:
    """Interior ranges ``(x_min, x_max, y_min, y_max)`` of rectangles inside the box."""
    iv = box_intervals(lo, hi)
    return [(a, b, c, d) for a, b in iv for c, d in iv]


def _move_table(rects, lo: int, hi: int) -> np.ndarray:
    index = {r: i for i, r in enumerate(rects)}
    table = np.full((len(rects), 8), -1, dtype=np.int32)
    for i, r in enumerate(rects):
        k = 0
        for side in range(4):
            for step in (-1, 1):
                s = list(r)
                s[side] += step
                if s[0] <= s[1] and s[2] <= s[3] and all(lo <= c <= hi for c in s):
                    table[i, k] = index[tuple(s)]
                    k += 1
    return table


@njit(cache=True)
def _constrained_bfs(moves, cover, full, src, dist, queue):
    n = moves.shape[0]
    for i in range(dist.shape[0]):
        dist[i] = -1
    start = src * 4 + cover[src]
    dist[start] = 0
    head, tail = 0, 1
    queue[0] = start
    while head < tail:
        s = queue[head]
        head += 1
        r = s // 4
        m = s % 4
        for k in range(8):
            t = moves[r, k]
            if t < 0:
                break
            u = t * 4 + (m | cover[t])
            if dist[u] < 0:
                dist[u] = dist[s] + 1
                queue[tail] = u
                tail += 1
    out = np.empty(n, dtype=np.int64)
    for r in range(n):
        out[r] = dist[r * 4 + full]
    return out


@njit(cache=True)
def _move_distances(moves, cover, full):
    n = moves.shape[0]
    dist = np.empty(n * 4, dtype=np.int64)
    queue = np.empty(n * 4, dtype=np.int64)
    out = np.empty((n, n), dtype=np.int64)
    for src in range(n):
        out[src] = _constrained_bfs(moves, cover, full, src, dist, queue)
    return out


def constrained_move_table(F, lo: int = -3, hi: int = 3):
    """BFS distances ``[R1, R2]`` over side moves inside the box, every point of ``F`` covered.

    A point counts as covered once it lies in the interior of some rectangle
    on the path (endpoints included).  Returns ``(rects, table)``.
    """
    F = list(F)
    if len(F) > 2:
        raise TooLarge("the constrained BFS tracks at most two points")
    rects = box_rectangles(lo, hi)
    moves = _move_table(rects, lo, hi)
    cover = np.zeros(len(rects), dtype=np.int64)
    for i, (a, b, c, d) in enumerate(rects):
        for k, (x, y) in enumerate(F):
            if a <= x <= b and c <= y <= d:
                cover[i] |= 1 << k
    full = (1 << len(F)) - 1
    return rects, _move_distances(moves, cover, full)


def point_sets(lo: int = -3, hi: int = 3, max_size: int = 2) -> list[tuple]:
    pts = [(x, y) for x in range(lo, hi + 1) for y in range(lo, hi + 1)]
    out = []
    for r in range(max_size + 1):
        out.extend(itertools.combinations(pts, r))
    return out


def _square_symmetries():
    return [
        lambda x, y: (x, y),
        lambda x, y: (-x, y),
        lambda x, y: (x, -y),
        lambda x, y: (-x, -y),
        lambda x, y: (y, x),
        lambda x, y: (-y, x),
        lambda x, y: (y, -x),
        lambda x, y: (-y, -x),
    ]


def symmetry_representatives(sets) -> list[tuple]:
    """One point set per orbit of the symmetries of a centred square box."""
    reps = set()
    for F in sets:
        images = [tuple(sorted(s(*p) for p in F)) for s in _square_symmetries()]
        reps.add(min(images))
    return sorted(reps, key=lambda F: (len(F), F))
