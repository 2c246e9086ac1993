import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwreath import graphs, oracles
from mwreath.errors import NotConnected, NotMedian
from mwreath.median import (
    ConvexSet,
    convex_hull,
    gate,
    gate_pair,
    interval,
    mask_of,
    median,
    median_closure,
    median_hull,
    verify_median_graph,
    walls,
    walls_separating,
)

from zoo import criterion_graphs

K2 = graphs.complete_graph(2)
C4 = graphs.cycle_graph(4)
P3 = graphs.path_graph(3)
P4 = graphs.path_graph(4)
GRID = graphs.grid_graph(3, 3)


def at(g, *labels):
    return [g.index(lab) for lab in labels]


class TestVerify:
    def test_edge_and_square(self):
        assert verify_median_graph(2, [(0, 1)]).n == 2
        assert C4.n == 4

    def test_triangle_witness(self):
        with pytest.raises(NotMedian) as exc:
            verify_median_graph(3, [(0, 1), (1, 2), (0, 2)])
        assert exc.value.triple == (0, 1, 2)
        assert exc.value.count == 0

    def test_k23_has_two_medians(self):
        edges = [(a, b) for a in (0, 1) for b in (2, 3, 4)]
        with pytest.raises(NotMedian) as exc:
            verify_median_graph(5, edges)
        assert exc.value.count >= 2

    def test_disconnected(self):
        with pytest.raises(NotConnected):
            verify_median_graph(3, [(0, 1)])

    def test_single_vertex(self):
        g = graphs.single_vertex()
        assert g.n == 1 and walls(g) == ()
        assert convex_hull(g, [0]).vertices == (0,)

    def test_distance_table(self):
        for _, g in criterion_graphs():
            d = g.dist
            for u, v in itertools.product(range(g.n), repeat=2):
                assert d[u][v] == d[v][u]
                assert (d[u][v] == 0) == (u == v)


class TestIntervalsAndMedians:
    def test_intervals(self):
        assert interval(K2, 0, 0) == {0}
        assert interval(C4, 0, 2) == {0, 1, 2, 3}
        assert interval(P3, 0, 2) == {0, 1, 2}

    def test_medians(self):
        assert median(C4, 0, 1, 2) == 1
        assert median(P3, 0, 0, 2) == 0
        a, b, c = at(GRID, (0, 0), (2, 0), (0, 2))
        assert median(GRID, a, b, c) == a

    def test_grid_median_is_coordinatewise_majority(self):
        for x, y, z in itertools.product(range(9), repeat=3):
            lx, ly, lz = (GRID.label(v) for v in (x, y, z))
            maj = tuple(sorted(c)[1] for c in zip(lx, ly, lz))
            assert GRID.label(median(GRID, x, y, z)) == maj

    def test_median_symmetric(self):
        for _, g in criterion_graphs()[:12]:
            for t in itertools.product(range(g.n), repeat=3):
                assert len({median(g, *p) for p in itertools.permutations(t)}) == 1


class TestWalls:
    def test_counts(self):
        assert len(walls(K2)) == 1
        assert {walls(K2)[0].side_a, walls(K2)[0].side_b} == {frozenset({0}), frozenset({1})}
        assert len(walls(C4)) == 2
        assert len(walls(P3)) == 2

    def test_separating(self):
        assert walls_separating(C4, 1, 1) == frozenset()
        assert len(walls_separating(C4, 0, 2)) == 2
        assert len(walls_separating(P3, 0, 2)) == 2

    def test_sides_convex_and_partition(self):
        for _, g in criterion_graphs():
            for w in walls(g):
                assert w.side_a | w.side_b == frozenset(range(g.n))
                assert not w.side_a & w.side_b
                assert oracles.is_convex(g.dist, w.side_a) and oracles.is_convex(g.dist, w.side_b)

    def test_walls_match_theta_classes(self):
        for _, g in criterion_graphs():
            assert len(walls(g)) == len(oracles.theta_classes(g.n, g.edges))


class TestHullsAndGates:
    def test_hull_examples(self):
        assert convex_hull(P3, [1, 2]).vertices == (1, 2)
        assert convex_hull(C4, [0, 2]).vertices == (0, 1, 2, 3)
        S = at(GRID, (0, 0), (2, 1))
        expected = sorted(at(GRID, *[(i, j) for i in range(3) for j in range(2)]))
        assert list(convex_hull(GRID, S).vertices) == expected

    def test_hull_matches_subset_scan(self):
        for name, g in criterion_graphs():
            if g.n > 8:
                continue
            convex = oracles.convex_sets(g.dist)
            for r in (1, 2, 3):
                for S in itertools.combinations(range(g.n), r):
                    assert frozenset(convex_hull(g, S).vertices) == oracles.hull_by_scan(g.dist, S, convex), name

    def test_hull_closure_properties(self):
        for S in itertools.combinations(range(9), 2):
            h = convex_hull(GRID, S)
            assert set(S) <= set(h.vertices)
            assert convex_hull(GRID, h) == h
            for T in itertools.combinations(range(9), 1):
                bigger = convex_hull(GRID, set(S) | set(T))
                assert set(h.vertices) <= set(bigger.vertices)

    def test_median_hull_is_not_the_hull(self):
        assert median_hull(C4, [0, 2]) == {0, 2}
        assert median_closure(C4, [0, 2]) == {0, 1, 2, 3}

    def test_gate_examples(self):
        assert gate(P3, P3.convex([0]), 2) == 0
        assert gate(P3, P3.convex([0, 1]), 1) == 1
        bottom = GRID.convex(at(GRID, (0, 0), (1, 0), (2, 0)))
        assert gate(GRID, bottom, GRID.index((1, 2))) == GRID.index((1, 0))

    def test_gate_pair_examples(self):
        C = P3.convex([1, 2])
        x1, x2 = gate_pair(P3, C, C)
        assert x1 == x2 and not walls_separating(P3, x1, x2)
        assert gate_pair(P4, P4.convex([0]), P4.convex([2, 3])) == (0, 2)
        left = GRID.convex(at(GRID, (0, 0), (0, 1), (0, 2)))
        right = GRID.convex(at(GRID, (2, 0), (2, 1), (2, 2)))
        x1, x2 = gate_pair(GRID, left, right)
        assert GRID.label(x1)[1] == GRID.label(x2)[1]
        assert len(walls_separating(GRID, x1, x2)) == 2

    def test_disjoint_convex_sets_are_separated(self):
        for name, g in criterion_graphs():
            if g.n > 7:
                continue
            convex = oracles.convex_sets(g.dist)
            for A, B in itertools.combinations(convex, 2):
                if A & B:
                    assert oracles.is_convex(g.dist, A & B)
                else:
                    x1, x2 = gate_pair(g, g.convex(A), g.convex(B))
                    assert walls_separating(g, x1, x2)

    def test_not_convex(self):
        from mwreath.errors import NotConvex

        with pytest.raises(NotConvex):
            C4.convex([0, 2])


@st.composite
def tree_and_sets(draw):
    n = draw(st.integers(1, 9))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    g = graphs.tree([(p, i + 1) for i, p in enumerate(parents)])
    S = draw(st.sets(st.integers(0, n - 1), min_size=1))
    x = draw(st.integers(0, n - 1))
    return g, S, x


@settings(max_examples=150, deadline=None)
@given(tree_and_sets())
def test_random_trees(data):
    g, S, x = data
    h = convex_hull(g, S)
    assert frozenset(h.vertices) == oracles.median_closure_hull(g.dist, S)
    p = gate(g, h, x)
    assert all(g.dist[x][p] + g.dist[p][c] == g.dist[x][c] for c in h.vertices)
    for u in range(g.n):
        assert len(walls_separating(g, x, u)) == g.dist[x][u]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.data())
def test_random_grids(cols, rows, data):
    g = graphs.grid_graph(cols, rows)
    S = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    h = convex_hull(g, S)
    labels = [g.label(v) for v in S]
    xs = [l[0] for l in labels]
    ys = [l[1] for l in labels]
    box = {g.index((i, j)) for i in range(min(xs), max(xs) + 1) for j in range(min(ys), max(ys) + 1)}
    assert set(h.vertices) == box
    assert isinstance(h, ConvexSet) and h.mask == mask_of(box)
