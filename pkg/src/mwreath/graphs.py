"""Builders for the small median graphs used throughout the checks."""

from __future__ import annotations

import itertools

from .median import MedianGraph, verify_median_graph


def single_vertex() -> MedianGraph:
    return verify_median_graph(1, [])


def path_graph(n: int) -> MedianGraph:
    return verify_median_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> MedianGraph:
    """Only n == 4 gives a median graph; other lengths raise NotMedian."""
    return verify_median_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> MedianGraph:
    return verify_median_graph(n, list(itertools.combinations(range(n), 2)))


def grid_graph(cols: int, rows: int) -> MedianGraph:
    """The ``cols x rows`` grid; vertex ``(i, j)`` gets id ``j * cols + i``."""
    labels = [(i, j) for j in range(rows) for i in range(cols)]
    edges = []
    for j in range(rows):
        for i in range(cols):
            v = j * cols + i
            if i + 1 < cols:
                edges.append((v, v + 1))
            if j + 1 < rows:
                edges.append((v, v + cols))
    return verify_median_graph(cols * rows, edges, labels)


def hypercube(dim: int) -> MedianGraph:
    n = 1 << dim
    edges = [(v, v ^ (1 << k)) for v in range(n) for k in range(dim) if v < v ^ (1 << k)]
    return verify_median_graph(n, edges)


def tree(edges) -> MedianGraph:
    edges = list(edges)
    return verify_median_graph(len(edges) + 1, edges)


def star(leaves: int) -> MedianGraph:
    return tree((0, i) for i in range(1, leaves + 1))


def product(g: MedianGraph, h: MedianGraph) -> MedianGraph:
    """Cartesian product; vertex ``(a, b)`` gets id ``a * h.n + b``."""
    edges = []
    for a in range(g.n):
        for u, v in h.edges:
            edges.append((a * h.n + u, a * h.n + v))
    for u, v in g.edges:
        for b in range(h.n):
            edges.append((u * h.n + b, v * h.n + b))
    labels = [(g.label(a), h.label(b)) for a in range(g.n) for b in range(h.n)]
    return verify_median_graph(g.n * h.n, edges, labels)


def from_json(doc: dict) -> MedianGraph:
    """Parse ``{"vertices": n, "edges": [[u, v], ...]}``."""
    return verify_median_graph(doc["vertices"], doc.get("edges", []))


def to_json(g: MedianGraph) -> dict:
    return {"vertices": g.n, "edges": [list(e) for e in g.edges]}
