"""The median space of nonempty convex subsets of a median graph.

Distances use the counting measure on walls: ``mu(S)`` is the number of walls
crossing the convex hull of ``S``.  Note that ``f_distance({x}, {y})`` equals
``2 * d(x, y)``.
"""

from __future__ import annotations

from collections import deque

from .errors import AmbientMismatch, TooLarge
from .median import ConvexSet, MedianGraph, bits, popcount, sort_key

__all__ = [
    "ConvexSet",
    "f_distance",
    "f_interval_contains",
    "f_median",
    "enumerate_convex",
    "union_hull",
]


def _same_ambient(*sets: ConvexSet) -> MedianGraph:
    g = sets[0].graph
    for s in sets[1:]:
        if s.graph is not g:
            raise AmbientMismatch("convex sets live in different graphs")
    return g


def union_hull(*sets: ConvexSet) -> ConvexSet:
    g = _same_ambient(*sets)
    m = 0
    for s in sets:
        m |= s.mask
    return ConvexSet(g, g.hull_mask(m))


def f_distance(C1: ConvexSet, C2: ConvexSet) -> int:
    """``2 * mu(C1 u C2) - mu(C1) - mu(C2)``."""
    hull = union_hull(C1, C2)
    return 2 * popcount(hull.crossing) - popcount(C1.crossing) - popcount(C2.crossing)


def f_interval_contains(C: ConvexSet, C1: ConvexSet, C2: ConvexSet) -> bool:
    """Whether ``C`` lies between ``C1`` and ``C2``, decided through walls.

    Three conditions: ``C`` is inside the hull of ``C1 u C2``; every wall
    crossing both ``C1`` and ``C2`` crosses ``C``; no wall crossing ``C1``
    separates ``C`` from ``C2`` (and symmetrically).
    """
    g = _same_ambient(C, C1, C2)
    hull = g.hull_mask(C1.mask | C2.mask)
    if C.mask & ~hull:
        return False
    if C1.crossing & C2.crossing & ~C.crossing:
        return False
    a, b = g.side_masks(C.mask)
    a1, b1 = g.side_masks(C1.mask)
    a2, b2 = g.side_masks(C2.mask)
    if C1.crossing & ((a & b2) | (b & a2)):
        return False
    if C2.crossing & ((a & b1) | (b & a1)):
        return False
    return True


def f_median(C1: ConvexSet, C2: ConvexSet, C3: ConvexSet) -> ConvexSet:
    """Intersection of the three pairwise hulls."""
    g = _same_ambient(C1, C2, C3)
    m = g.hull_mask(C1.mask | C2.mask) & g.hull_mask(C2.mask | C3.mask) & g.hull_mask(C1.mask | C3.mask)
    # nonempty: contains m(x1, x2, x3) for any xi in Ci
    assert m, "pairwise hulls have empty intersection"
    return ConvexSet(g, m)


def enumerate_convex(g: MedianGraph, max_vertices: int = 12) -> list[ConvexSet]:
    """All nonempty convex sets, sorted by size then vertex tuple.

    Every convex set is reached from a singleton by repeatedly adding an
    adjacent vertex and taking the hull, so a closure from the singletons
    is exhaustive.
    """
    if g.n > max_vertices:
        raise TooLarge(f"graph has {g.n} vertices, bound is {max_vertices}")
    seen = {1 << v for v in range(g.n)}
    queue = deque(seen)
    nbr = g._nbr_mask
    while queue:
        m = queue.popleft()
        boundary = 0
        for v in bits(m):
            boundary |= nbr[v]
        boundary &= ~m
        for x in bits(boundary):
            h = g.hull_mask(m | (1 << x))
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return [ConvexSet(g, m) for m in sorted(seen, key=sort_key)]
