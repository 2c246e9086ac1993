"""Declarative property checks run against a model document.

Each check has a name, a one-line property statement, an instance generator
and a per-instance predicate.  Some checks also carry a vectorised fast path
used for exhaustive runs; failures are always re-confirmed (and replayable)
through the per-instance predicate.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .actions import apply_wreath_element, stabilizer
from .convex import enumerate_convex, f_distance, f_interval_contains, f_median
from .errors import InvalidDocument, MWreathError, TooLarge
from .io import ModelDocument, parse_document
from .median import bits, gate, gate_pair, mask_of, separating_walls_between, walls_separating

MAX_WITNESSES = 3


@dataclass
class CheckReport:
    name: str
    anchor: str
    instances: int = 0
    failures: list = field(default_factory=list)
    duration: float = 0.0
    skipped: str | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def status(self) -> str:
        if self.skipped:
            return "skipped"
        return "pass" if self.passed else "FAIL"

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "instances": self.instances,
            "failures": self.failures,
        }
        if self.skipped:
            out["skipped"] = self.skipped
        if timing:
            out["duration"] = round(self.duration, 4)
        return out

    def line(self) -> str:
        extra = f" ({self.skipped})" if self.skipped else ""
        return f"[{self.status}] {self.name}: {self.instances} instances, {len(self.failures)} failures{extra}"


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    instances: object
    holds: object
    render: object = None
    fast: object = None
    applies: object = None


REGISTRY: dict[str, Check] = {}


def register(name, anchor, instances, holds, render=None, fast=None, applies=None):
    REGISTRY[name] = Check(name, anchor, instances, holds, render, fast, applies)


class Skip(Exception):
    pass


# -- shared, lazily computed data --------------------------------------------------


class Context:
    def __init__(self, doc: ModelDocument):
        self.doc = doc
        self.space = doc.space
        self.rng = random.Random(doc.seed)
        self._cache = {}

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def limit(self) -> int:
        return self.doc.bounds["triples"]

    def graph(self, key: str):
        return self.doc.X if key == "lamp" else self.doc.Y

    def graph_keys(self):
        return ("lamp", "base")

    def dist(self, key):
        g = self.graph(key)
        return self.cached(("dist", key), lambda: oracles.distance_matrix(g.n, g.edges))

    def convex(self, key):
        g = self.graph(key)
        return self.cached(("convex", key), lambda: enumerate_convex(g, max_vertices=max(12, g.n)))

    def family_distances(self) -> np.ndarray:
        def build():
            sets = self.convex("base")
            return np.array([[f_distance(a, b) for b in sets] for a in sets], dtype=np.int64)

        return self.cached("DF", build)

    def wreaths(self):
        def build():
            try:
                return self.space.enumerate_wreaths(bound=self.doc.bounds["wreaths"])
            except TooLarge as exc:
                raise Skip(str(exc)) from None

        return self.cached("wreaths", build)

    def wreath_index(self):
        return self.cached("windex", lambda: {w: i for i, w in enumerate(self.wreaths())})

    def delta_matrix(self) -> np.ndarray:
        def build():
            ws = self.wreaths()
            n = len(ws)
            D = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                for j in range(i + 1, n):
                    D[i, j] = D[j, i] = self.space.delta(ws[i], ws[j])
            return D

        return self.cached("D", build)

    def leaves(self) -> dict:
        def build():
            out = {}
            for i, w in enumerate(self.wreaths()):
                out.setdefault(w.lamps, []).append(i)
            return out

        return self.cached("leaves", build)

    def leaf_list(self):
        return self.cached("leaf_list", lambda: list(self.leaves()))

    def model(self):
        return self.cached("model", self.doc.model)

    def elements(self):
        def build():
            try:
                return self.model().enumerate_elements(bound=self.doc.bounds["wreaths"])
            except TooLarge as exc:
                raise Skip(str(exc)) from None

        return self.cached("elements", build)

    def oracle_wreath_graph(self):
        def build():
            X, Y = self.doc.X, self.doc.Y
            return oracles.wreath_graph(X.n, X.edges, Y.n, Y.edges, self.doc.x0)

        return self.cached("owg", build)

    def oracle_key(self, w):
        return frozenset(w.base.vertices), tuple(w.lamps(y) for y in range(self.doc.Y.n))

    def product(self, *sizes):
        """All index tuples, or a seeded sorted sample when there are too many."""
        total = math.prod(sizes)
        if total <= self.limit:
            return itertools.product(*(range(s) for s in sizes))
        picks = sorted(self.rng.sample(range(total), self.limit))
        out = []
        for p in picks:
            idx = []
            for s in reversed(sizes):
                p, r = divmod(p, s)
                idx.append(r)
            out.append(tuple(reversed(idx)))
        return out

    def exhaustive(self, *sizes) -> bool:
        return math.prod(sizes) <= self.limit


# -- median graphs ---------------------------------------------------------------


def _graph_triples(ctx):
    for key in ctx.graph_keys():
        n = ctx.graph(key).n
        for t in itertools.combinations_with_replacement(range(n), 3):
            yield (key, *t)


def _median_holds(ctx, inst):
    key, x, y, z = inst
    cands = oracles.median_candidates(ctx.dist(key), x, y, z)
    return len(cands) == 1 and cands[0] == ctx.graph(key).median_vertex(x, y, z)


register(
    "median-graph",
    "every triple of vertices has exactly one median",
    _graph_triples,
    _median_holds,
)


def _graph_pairs(ctx):
    for key in ctx.graph_keys():
        n = ctx.graph(key).n
        for u, v in itertools.combinations_with_replacement(range(n), 2):
            yield key, u, v


def _wall_count_holds(ctx, inst):
    key, u, v = inst
    g = ctx.graph(key)
    return len(walls_separating(g, u, v)) == ctx.dist(key)[u][v]


register(
    "wall-count",
    "the number of walls separating two vertices equals their distance",
    _graph_pairs,
    _wall_count_holds,
)


def _convex_pairs(ctx):
    for key in ctx.graph_keys():
        m = len(ctx.convex(key))
        for i, j in ctx.product(m, m):
            yield key, i, j


def _gate_pair_holds(ctx, inst):
    key, i, j = inst
    g = ctx.graph(key)
    C1, C2 = ctx.convex(key)[i], ctx.convex(key)[j]
    dist = ctx.dist(key)
    x1, x2 = gate_pair(g, C1, C2)
    if x1 not in C1 or x2 not in C2:
        return False
    if gate(g, C1, x2) != x1 or gate(g, C2, x1) != x2:
        return False
    if walls_separating(g, x1, x2) != separating_walls_between(g, C1, C2):
        return False
    return dist[x1][x2] == min(dist[a][b] for a in C1 for b in C2)


def _render_convex_pair(ctx, inst):
    key, i, j = inst
    return {"graph": key, "C1": list(ctx.convex(key)[i].vertices), "C2": list(ctx.convex(key)[j].vertices)}


register(
    "gate-laws",
    "mutual gates of two convex sets realise their distance and are separated by exactly the walls separating the sets",
    _convex_pairs,
    _gate_pair_holds,
    _render_convex_pair,
)


def _convex_points(ctx):
    for key in ctx.graph_keys():
        for i, x in ctx.product(len(ctx.convex(key)), ctx.graph(key).n):
            yield key, i, x


def _gate_holds(ctx, inst):
    key, i, x = inst
    g = ctx.graph(key)
    C = ctx.convex(key)[i]
    p = gate(g, C, x)
    dist = ctx.dist(key)
    return p in C and all(dist[x][p] + dist[p][c] == dist[x][c] for c in C)


register(
    "gate-projection",
    "the gate of a vertex onto a convex set lies on a geodesic from the vertex to every point of the set",
    _convex_points,
    _gate_holds,
    lambda ctx, inst: {"graph": inst[0], "C": list(ctx.convex(inst[0])[inst[1]].vertices), "x": inst[2]},
)


def _subsets(ctx):
    for key in ctx.graph_keys():
        n = ctx.graph(key).n
        total = (1 << n) - 1
        if total <= ctx.limit:
            masks = range(1, total + 1)
        else:
            masks = sorted(ctx.rng.sample(range(1, total + 1), ctx.limit))
        for m in masks:
            yield key, m


def _hull_holds(ctx, inst):
    key, m = inst
    g = ctx.graph(key)
    dist = ctx.dist(key)
    S = list(bits(m))
    hull = g.hull_mask(m)
    if mask_of(oracles.median_closure_hull(dist, S)) != hull:
        return False
    if not oracles.is_convex(dist, bits(hull)):
        return False
    ternary = mask_of(oracles.ternary_median_hull(dist, S))
    return ternary & ~hull == 0 and g.hull_mask(ternary) == hull


register(
    "hull-closure",
    "interval closure and closure under medians with a free third argument give the same convex hull, which contains and is generated by the ternary median hull",
    _subsets,
    _hull_holds,
    lambda ctx, inst: {"graph": inst[0], "S": list(bits(inst[1]))},
)


# -- the family of convex sets -----------------------------------------------------


def _family_triples(ctx):
    m = len(ctx.convex("base"))
    return ctx.product(m, m, m)


def _metric_interval(D):
    """``In[a, b, c]``: c lies on a geodesic from a to b."""
    return D[:, None, :] + D.T[None, :, :] == D[:, :, None]


def _family_median_holds(ctx, inst):
    i, j, k = inst
    D = ctx.family_distances()
    sets = ctx.convex("base")
    inside = (
        (D[i] + D[:, j] == D[i, j])
        & (D[j] + D[:, k] == D[j, k])
        & (D[i] + D[:, k] == D[i, k])
    )
    hits = np.flatnonzero(inside)
    if len(hits) != 1:
        return False
    return sets[hits[0]] == f_median(sets[i], sets[j], sets[k])


def _family_median_fast(ctx):
    sets = ctx.convex("base")
    m = len(sets)
    if not ctx.exhaustive(m, m, m):
        return None
    D = ctx.family_distances()
    In = _metric_interval(D)
    index = {c: n for n, c in enumerate(sets)}
    bad = []
    for i in range(m):
        both = In[i][:, None, :] & In[i][None, :, :] & In  # [j, k, c]
        counts = both.sum(axis=2)
        arg = both.argmax(axis=2)
        for j in range(m):
            for k in range(m):
                if counts[j, k] != 1 or arg[j, k] != index[f_median(sets[i], sets[j], sets[k])]:
                    bad.append((i, j, k))
    return m ** 3, bad


register(
    "family-median",
    "three convex sets have exactly one median in the family of convex sets, the intersection of their pairwise hulls",
    _family_triples,
    _family_median_holds,
    lambda ctx, inst: {"C": [list(ctx.convex("base")[i].vertices) for i in inst]},
    _family_median_fast,
)


def _family_interval_holds(ctx, inst):
    c, i, j = inst
    D = ctx.family_distances()
    sets = ctx.convex("base")
    metric = D[i, c] + D[c, j] == D[i, j]
    return f_interval_contains(sets[c], sets[i], sets[j]) == bool(metric)


def _family_interval_fast(ctx):
    sets = ctx.convex("base")
    m = len(sets)
    if not ctx.exhaustive(m, m, m):
        return None
    In = _metric_interval(ctx.family_distances())
    bad = []
    for i in range(m):
        for j in range(m):
            row = In[i, j]
            for c in range(m):
                if f_interval_contains(sets[c], sets[i], sets[j]) != bool(row[c]):
                    bad.append((c, i, j))
    return m ** 3, bad


register(
    "family-interval",
    "a convex set lies between two others exactly when the wall conditions on hull, common crossing walls and separation hold",
    _family_triples,
    _family_interval_holds,
    lambda ctx, inst: {"C": [list(ctx.convex("base")[i].vertices) for i in inst]},
    _family_interval_fast,
)


# -- wreaths -------------------------------------------------------------------------


def _render_wreaths(ctx, inst):
    ws = ctx.wreaths()
    out = []
    for i in inst:
        out.append(ctx.space.to_json(ws[i]) if isinstance(i, int) else i)
    return {"wreaths": out}


def _each_wreath(ctx):
    return ((i,) for i in range(len(ctx.wreaths())))


def _wreath_metric_holds(ctx, inst):
    (i,) = inst
    ws = ctx.wreaths()
    windex = ctx.wreath_index()
    vertices, neighbors = ctx.oracle_wreath_graph()
    key_to_index = ctx.cached(
        "okeys", lambda: {ctx.oracle_key(w): n for n, w in enumerate(ws)}
    )
    dist = oracles.bfs_oracle(neighbors, ctx.oracle_key(ws[i]))
    if len(dist) != len(ws):
        return False
    D = ctx.delta_matrix()
    row = np.zeros(len(ws), dtype=np.int64)
    for key, d in dist.items():
        row[key_to_index[key]] = d
    if not np.array_equal(row, D[i]):
        return False
    lib = sorted(windex[u] for u in ctx.space.neighbors(ws[i]))
    ora = sorted(key_to_index[u] for u in neighbors(ctx.oracle_key(ws[i])))
    return lib == ora


register(
    "wreath-metric",
    "the wreath distance is the path metric of the graph whose edges join wreaths at distance one",
    _each_wreath,
    _wreath_metric_holds,
    _render_wreaths,
)


def _wreath_triples(ctx):
    n = len(ctx.wreaths())
    return ctx.product(n, n, n)


def _wreath_median_holds(ctx, inst):
    i, j, k = inst
    ws = ctx.wreaths()
    D = ctx.delta_matrix()
    inside = (
        (D[i] + D[:, j] == D[i, j])
        & (D[j] + D[:, k] == D[j, k])
        & (D[i] + D[:, k] == D[i, k])
    )
    hits = np.flatnonzero(inside)
    if len(hits) != 1:
        return False
    return ws[hits[0]] == ctx.space.wreath_median(ws[i], ws[j], ws[k])


def _wreath_median_fast(ctx):
    ws = ctx.wreaths()
    n = len(ws)
    if not ctx.exhaustive(n, n, n) or n > 400:
        return None
    D = ctx.delta_matrix()
    In = _metric_interval(D)
    index = ctx.wreath_index()
    med = ctx.space.wreath_median
    bad = []
    for i in range(n):
        both = In[i][:, None, :] & In[i][None, :, :] & In
        counts = both.sum(axis=2)
        arg = both.argmax(axis=2)
        for j in range(n):
            for k in range(j, n):
                ok = counts[j, k] == 1 and arg[j, k] == index[med(ws[i], ws[j], ws[k])]
                if not ok:
                    bad.append((i, j, k))
                    if k != j:
                        bad.append((i, k, j))
    bad.sort()
    return n ** 3, bad


register(
    "wreath-median",
    "three wreaths have exactly one median: pointwise lamp medians over the hull of base medians",
    _wreath_triples,
    _wreath_median_holds,
    _render_wreaths,
    _wreath_median_fast,
)


def _leaf_pairs(ctx):
    leaves = ctx.leaves()
    for li, phi in enumerate(ctx.leaf_list()):
        members = leaves[phi]
        for a, b in itertools.combinations_with_replacement(members, 2):
            yield a, b


def _leaf_isometry_holds(ctx, inst):
    a, b = inst
    ws = ctx.wreaths()
    return ctx.delta_matrix()[a, b] == f_distance(ws[a].base, ws[b].base)


register(
    "leaf-isometry",
    "inside one leaf the wreath distance equals the distance between base convex sets",
    _leaf_pairs,
    _leaf_isometry_holds,
    _render_wreaths,
)


def _leaf_convexity_holds(ctx, inst):
    a, b = inst
    ws = ctx.wreaths()
    D = ctx.delta_matrix()
    between = np.flatnonzero(D[a] + D[:, b] == D[a, b])
    return all(ws[c].lamps == ws[a].lamps for c in between)


register(
    "leaf-convexity",
    "a leaf is convex",
    _leaf_pairs,
    _leaf_convexity_holds,
    _render_wreaths,
)


def _wreath_leaf_pairs(ctx):
    return ctx.product(len(ctx.wreaths()), len(ctx.leaf_list()))


def _leaf_projection_holds(ctx, inst):
    i, li = inst
    ws = ctx.wreaths()
    phi = ctx.leaf_list()[li]
    D = ctx.delta_matrix()
    p = ctx.space.leaf_projection(phi, ws[i])
    if p.lamps != phi:
        return False
    pi = ctx.wreath_index()[p]
    members = ctx.leaves()[phi]
    return all(D[i, u] == D[i, pi] + D[pi, u] for u in members)


register(
    "leaf-projection",
    "the projection onto a leaf, hull of the base with the lamp difference, is a gate",
    _wreath_leaf_pairs,
    _leaf_projection_holds,
    lambda ctx, inst: {
        "wreath": ctx.space.to_json(ctx.wreaths()[inst[0]]),
        "leaf": {str(y): x for y, x in ctx.leaf_list()[inst[1]].overrides},
    },
)


def _leaf_pair_pairs(ctx):
    n = len(ctx.wreaths())
    return ctx.product(len(ctx.leaf_list()), n, n)


def _interval_leaf_holds(ctx, inst):
    li, a, b = inst
    phi = ctx.leaf_list()[li]
    ws = ctx.wreaths()
    D = ctx.delta_matrix()
    members = np.array(ctx.leaves()[phi])
    meets = bool(np.any(D[a, members] + D[members, b] == D[a, b]))
    return ctx.space.interval_meets_leaf(phi, ws[a], ws[b]) == meets


register(
    "interval-meets-leaf",
    "the interval between two wreaths meets the leaf of a labelling exactly when the labelling lies pointwise between theirs",
    _leaf_pair_pairs,
    _interval_leaf_holds,
    lambda ctx, inst: {
        "leaf": {str(y): x for y, x in ctx.leaf_list()[inst[0]].overrides},
        **_render_wreaths(ctx, inst[1:]),
    },
)


# -- actions ----------------------------------------------------------------------------


def _has_actions(ctx):
    return ctx.doc.has_actions


def _basepoint_instances(ctx):
    return [("lamp",), ("base",)]


def _basepoint_holds(ctx, inst):
    model = ctx.model()
    action = model.G if inst[0] == "lamp" else model.H
    point = ctx.doc.x0 if inst[0] == "lamp" else ctx.doc.y0
    return [g.is_identity for g in action.stabilizer(point)] == [True]


register(
    "basepoint-stabiliser",
    "the lamp and base basepoints have trivial stabilisers",
    _basepoint_instances,
    _basepoint_holds,
    lambda ctx, inst: {"graph": inst[0]},
    applies=_has_actions,
)


def _each_element(ctx):
    return ((i,) for i in range(len(ctx.elements())))


def _image_permutation(ctx, e):
    model = ctx.model()
    index = ctx.wreath_index()
    out = []
    for w in ctx.wreaths():
        img = apply_wreath_element(model, e, w)
        if img not in index:
            return None
        out.append(index[img])
    return np.array(out)


def _isometry_holds(ctx, inst):
    e = ctx.elements()[inst[0]]
    perm = _image_permutation(ctx, e)
    if perm is None or len(set(perm.tolist())) != len(perm):
        return False
    D = ctx.delta_matrix()
    return np.array_equal(D[np.ix_(perm, perm)], D)


def _render_element(ctx, inst):
    return {"element": repr(ctx.elements()[inst[0]])}


register(
    "action-isometry",
    "every element of the wreath product permutes the wreaths isometrically",
    _each_element,
    _isometry_holds,
    _render_element,
    applies=_has_actions,
)


def _law_instances(ctx):
    n = len(ctx.elements())
    return ctx.product(n, n)


def _law_holds(ctx, inst):
    model = ctx.model()
    els = ctx.elements()
    e1, e2 = els[inst[0]], els[inst[1]]
    prod = model.multiply(e1, e2)
    ident = model.identity()
    for w in ctx.wreaths()[:: max(1, len(ctx.wreaths()) // 64)]:
        if apply_wreath_element(model, ident, w) != w:
            return False
        lhs = apply_wreath_element(model, prod, w)
        rhs = apply_wreath_element(model, e1, apply_wreath_element(model, e2, w))
        if lhs != rhs:
            return False
    return model.multiply(e1, model.inverse(e1)) == ident


register(
    "action-laws",
    "the identity acts trivially and acting by a product is acting by the factors in turn",
    _law_instances,
    _law_holds,
    lambda ctx, inst: {"elements": [repr(ctx.elements()[i]) for i in inst]},
    applies=_has_actions,
)


def _stabiliser_holds(ctx, inst):
    model = ctx.model()
    base = ctx.space.base_wreath()
    stab = stabilizer(model, base)
    brute = [e for e in ctx.elements() if apply_wreath_element(model, e, base) == base]
    return stab == [model.identity()] and brute == [model.identity()]


register(
    "wreath-stabiliser",
    "the base wreath, singleton base with constant lamps, has trivial stabiliser",
    lambda ctx: [("base",)],
    _stabiliser_holds,
    lambda ctx, inst: {"wreath": ctx.space.to_json(ctx.space.base_wreath())},
    applies=lambda ctx: ctx.doc.has_actions and ctx.model().G.is_total and ctx.model().H.is_total,
)


def _radius_instances(ctx):
    return [(r,) for r in range(5)]


def _properness_holds(ctx, inst):
    from .actions import properness_ball

    (R,) = inst
    model = ctx.model()
    base = ctx.space.base_wreath()
    ball = properness_ball(model, R, strict=False)
    brute = ctx.cached(
        "moves",
        lambda: [
            (e, ctx.space.delta(apply_wreath_element(model, e, base), base)) for e in ctx.elements()
        ],
    )
    return ball == {e for e, d in brute if d <= R}


register(
    "properness-ball",
    "the elements moving the base wreath by at most R are exactly those found by the pruned search",
    _radius_instances,
    _properness_holds,
    lambda ctx, inst: {"R": inst[0]},
    applies=_has_actions,
)


# -- running ----------------------------------------------------------------------------


def _run_one(ctx: Context, check: Check) -> CheckReport:
    report = CheckReport(check.name, check.anchor)
    start = time.perf_counter()
    try:
        if check.applies is not None and not check.applies(ctx):
            report.skipped = "not applicable to this document"
            return report
        result = check.fast(ctx) if check.fast is not None else None
        if result is not None:
            count, suspects = result
            failing = [inst for inst in suspects if not check.holds(ctx, inst)]
        else:
            count, failing = 0, []
            for inst in check.instances(ctx):
                count += 1
                if not check.holds(ctx, inst):
                    failing.append(inst)
        report.instances = count
        for inst in failing[:MAX_WITNESSES]:
            witness = {"instance": list(inst)}
            if check.render is not None:
                witness.update(check.render(ctx, inst))
            report.failures.append(witness)
        if len(failing) > MAX_WITNESSES:
            report.failures.append({"more": len(failing) - MAX_WITNESSES})
    except Skip as exc:
        report.skipped = str(exc)
    finally:
        report.duration = time.perf_counter() - start
    return report


def check_names() -> list[str]:
    return sorted(REGISTRY)


def run_check_suite(doc, selection=None, seed=None) -> list[CheckReport]:
    """Run the selected checks (all by default) and return reports sorted by name.

    ``doc`` is a :class:`ModelDocument` or its JSON form.  ``selection`` is a
    name or an iterable of names.
    """
    if isinstance(doc, dict):
        doc = parse_document(doc)
    if not isinstance(doc, ModelDocument):
        raise InvalidDocument("run_check_suite needs a model document")
    if seed is not None:
        doc.seed = int(seed)
    if selection is None:
        names = check_names()
    else:
        names = [selection] if isinstance(selection, str) else list(selection)
        unknown = [n for n in names if n not in REGISTRY]
        if unknown:
            raise InvalidDocument(f"unknown check(s) {unknown}; known: {check_names()}")
    ctx = Context(doc)
    return [_run_one(ctx, REGISTRY[name]) for name in sorted(set(names))]


def replay(doc, name: str, instance) -> bool:
    """Re-evaluate one instance; True when the property holds."""
    if isinstance(doc, dict):
        doc = parse_document(doc)
    check = REGISTRY[name]
    ctx = Context(doc)
    try:
        return bool(check.holds(ctx, tuple(instance)))
    except MWreathError:
        return False
