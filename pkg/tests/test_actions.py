import itertools

import pytest

from mwreath import graphs
from mwreath.actions import (
    GroupAction,
    WreathModel,
    apply_wreath_element,
    augment_free_basepoint,
    properness_ball,
    stabilizer,
    trivial_action,
)
from mwreath.errors import InvalidAction, OrbitNotClosed, TruncationTooSmall
from mwreath.median import verify_median_graph
from mwreath.wreath import WreathSpace

K2 = graphs.complete_graph(2)
P3 = graphs.path_graph(3)
C4 = graphs.cycle_graph(4)


def swap_k2(g=K2):
    return GroupAction(g, {"s": [1, 0]})


def test_generator_validation():
    with pytest.raises(InvalidAction):
        GroupAction(P3, {"bad": [1, 0, 2]})  # breaks the edge (1, 2)
    with pytest.raises(InvalidAction):
        GroupAction(P3, {"short": [0, 1]})
    with pytest.raises(InvalidAction):
        GroupAction(P3, {"dup": [0, 0, 2]})
    with pytest.raises(InvalidAction):
        GroupAction(P3, {"t": [1, 2, None]})  # truncated without basepoint


def test_group_orders():
    assert GroupAction(C4, {"a": [1, 0, 3, 2], "b": [3, 2, 1, 0]}).order == 4
    assert GroupAction(C4, {"r": [1, 2, 3, 0]}).order == 4
    assert GroupAction(C4, {"r": [1, 2, 3, 0], "f": [0, 3, 2, 1]}).order == 8
    assert trivial_action(P3).order == 1


def test_truncated_group():
    Z = GroupAction(graphs.path_graph(5), {"t": [1, 2, 3, 4, None]}, basepoint=2, truncation_radius=2)
    assert Z.order == 5
    assert sorted(g.perm[2] for g in Z.elements()) == [0, 1, 2, 3, 4]
    with pytest.raises(OrbitNotClosed):
        augment_free_basepoint(Z.graph, Z, 2)


def test_augment_trivial_group():
    g2, a2, base = augment_free_basepoint(P3, trivial_action(P3), 1)
    assert g2.n == 4 and base == 3
    assert [e.is_identity for e in a2.stabilizer(base)] == [True]


def test_augment_reflection_of_p3():
    refl = GroupAction(P3, {"r": [2, 1, 0]})
    g2, a2, base = augment_free_basepoint(P3, refl, 1)
    assert g2.n == 5
    assert sorted(v for v in g2.adj[1]) == [0, 2, 3, 4]
    assert len(a2.stabilizer(base)) == 1
    assert a2.order == 2
    # the reflection swaps the two pendants at the fixed vertex
    r = a2.elements()[1]
    assert r.perm[3] == 4 and r.perm[4] == 3


def test_augment_free_action():
    g2, a2, base = augment_free_basepoint(K2, swap_k2(), 0)
    assert g2.n == 4
    assert len(a2.stabilizer(base)) == 1


def test_augment_klein_four():
    klein = GroupAction(C4, {"a": [1, 0, 3, 2], "b": [3, 2, 1, 0]})
    g2, a2, base = augment_free_basepoint(C4, klein, 0)
    assert g2.n == 8 and a2.order == 4
    verify_median_graph(g2.n, g2.edges)
    for v in range(4, 8):
        assert len(a2.stabilizer(v)) == 1
    # action laws on pendants
    for g, h in itertools.product(a2.elements(), repeat=2):
        gh = a2.compose(g, h)
        for v in range(g2.n):
            assert gh.perm[v] == g.perm[h.perm[v]]


@pytest.fixture
def kk_model():
    Y, H, y0 = augment_free_basepoint(K2, swap_k2(), 0)
    X, G, x0 = augment_free_basepoint(K2, swap_k2(), 0)
    return WreathModel(WreathSpace(X, Y, x0, y0), G, H)


def test_apply_examples(kk_model):
    M = kk_model
    space = M.space
    base = space.base_wreath()
    assert apply_wreath_element(M, M.identity(), base) == base
    swap = M.H.elements()[1]
    moved = apply_wreath_element(M, M.element(swap), base)
    assert moved == space.wreath([swap.perm[space.y0]])
    flip = M.G.elements()[1]
    full = space.wreath(list(range(space.Y.n)))
    out = apply_wreath_element(M, M.element(M.H.identity, {space.y0: flip}), full)
    assert out.lamps.as_dict() == {space.y0: flip.perm[space.x0]}


def test_group_law_and_inverse(kk_model):
    M = kk_model
    space = M.space
    ws = [space.base_wreath(), space.wreath([0, 1], {0: 1}), space.wreath(list(range(space.Y.n)), {3: 2})]
    els = M.enumerate_elements()
    assert len(els) == 2 * 2 ** 2
    for e1, e2 in itertools.product(els, repeat=2):
        prod = M.multiply(e1, e2)
        for w in ws:
            assert apply_wreath_element(M, prod, w) == apply_wreath_element(
                M, e1, apply_wreath_element(M, e2, w)
            )
        assert M.multiply(e1, M.inverse(e1)) == M.identity()


def test_stabilizers(kk_model):
    M = kk_model
    space = M.space
    assert stabilizer(M, space.base_wreath()) == [M.identity()]
    full = space.wreath(list(range(space.Y.n)))
    stab = stabilizer(M, full)
    assert sorted(e.h.perm for e in stab) == sorted(h.perm for h in M.H.elements())
    assert all(not e.psi for e in stab)
    brute = [e for e in M.enumerate_elements() if apply_wreath_element(M, e, full) == full]
    assert set(brute) == set(stab)


def test_trivial_group_stabilizer():
    space = WreathSpace(K2, P3)
    M = WreathModel(space, trivial_action(K2), trivial_action(P3))
    assert stabilizer(M, space.wreath([0, 1], {1: 1})) == [M.identity()]


def test_finite_properness(kk_model):
    M = kk_model
    els = set(M.enumerate_elements())
    assert properness_ball(M, 0) == {M.identity()}
    balls = [properness_ball(M, R) for R in range(14)]  # the farthest element moves the base by 12
    for a, b in zip(balls, balls[1:]):
        assert a <= b
    assert balls[-1] == els


def zz_model():
    X = graphs.path_graph(5)
    Y = graphs.path_graph(7)
    G = GroupAction(X, {"t": [1, 2, 3, 4, None]}, basepoint=2, truncation_radius=2)
    H = GroupAction(Y, {"u": [1, 2, 3, 4, 5, 6, None]}, basepoint=3, truncation_radius=3)
    return WreathModel(WreathSpace(X, Y, 2, 3), G, H)


def test_truncated_properness():
    M = zz_model()
    with pytest.raises(TruncationTooSmall):
        properness_ball(M, 4, strict=True)
    assert properness_ball(M, 2, strict=True) == properness_ball(M, 2, strict=False)
    sizes = [len(properness_ball(M, R, strict=False)) for R in range(5)]
    assert sizes == [1, 3, 7, 19, 49]


def test_truncated_ball_brute_force_small_radius():
    M = zz_model()
    base = M.space.base_wreath()
    ball = properness_ball(M, 3, strict=False)
    orbit = M.orbit_points
    # a lamp at distance k from y0 costs at least 2k + 1
    near = [y for y in orbit if abs(y - 3) <= 1]
    found = set()
    for h in M.H.elements():
        for values in itertools.product(M.G.elements(), repeat=len(near)):
            e = M.element(h, dict(zip(near, values)))
            if M.space.delta(apply_wreath_element(M, e, base), base) <= 3:
                found.add(e)
    assert found == ball
