"""Small median graphs shared by the tests."""

from __future__ import annotations

import networkx as nx

from mwreath import graphs


def trees(max_vertices=7):
    out = []
    for n in range(1, max_vertices + 1):
        for t in nx.nonisomorphic_trees(n) if n > 1 else [nx.empty_graph(1)]:
            out.append((f"tree{n}-{len(out)}", graphs.tree(sorted(t.edges()))))
    return out


def criterion_graphs():
    """K2, paths up to 6, C4, grids up to 3x3 and all trees up to 7 vertices."""
    out = [("K2", graphs.complete_graph(2)), ("C4", graphs.cycle_graph(4))]
    out += [(f"P{n}", graphs.path_graph(n)) for n in range(1, 7)]
    out += [
        (f"grid{c}x{r}", graphs.grid_graph(c, r))
        for c in range(1, 4)
        for r in range(1, 4)
    ]
    out += trees(7)
    return out


def edge_doc(g):
    return {"vertices": g.n, "edges": [list(e) for e in g.edges]}
