"""Group actions by graph automorphisms and the induced action on wreaths.

A :class:`GroupAction` is given by generator permutations of a median graph.
Finite actions use total permutations and the group is the closure of the
generators.  Truncations of infinite actions (for instance ``Z`` translating a
path) use partial permutations, with ``None`` marking images that leave the
model; their elements are identified by where they send the basepoint, which
is sound as long as the basepoint has trivial stabiliser.

Words are tuples of generator names in the order they are applied.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    InvalidAction,
    InvalidInput,
    OrbitNotClosed,
    SupportOutsideModel,
    TooLarge,
    TruncationTooSmall,
)
from .median import ConvexSet, MedianGraph, bits, verify_median_graph
from .wreath import Labelling, Wreath, WreathSpace


@dataclass(frozen=True)
class GroupElement:
    perm: tuple
    word: tuple = field(default=(), compare=False)

    def __call__(self, v: int):
        return self.perm[v]

    @property
    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.perm) if p is not None)

    @property
    def name(self) -> str:
        return "*".join(self.word) if self.word else "1"

    def __repr__(self):
        return f"<{self.name}>"


def _compose(a: tuple, b: tuple) -> tuple:
    """Partial permutation ``a o b`` (apply ``b`` first)."""
    return tuple(None if x is None else a[x] for x in b)


def _invert(a: tuple) -> tuple:
    inv = [None] * len(a)
    for i, x in enumerate(a):
        if x is not None:
            inv[x] = i
    return tuple(inv)


class GroupAction:
    def __init__(
        self,
        graph: MedianGraph,
        generators: dict,
        basepoint: int | None = None,
        truncation_radius: int | None = None,
        max_elements: int = 100_000,
    ):
        self.graph = graph
        self.basepoint = basepoint
        self.max_elements = max_elements
        gens = {}
        for name, perm in generators.items():
            gens[str(name)] = self._validate(str(name), perm)
        for name, perm in list(gens.items()):
            inv = _invert(perm)
            if inv not in gens.values():
                gens[f"{name}^-1"] = inv
        self.generators = gens
        self.is_total = all(None not in p for p in gens.values())
        if not self.is_total:
            if basepoint is None:
                raise InvalidAction("a truncated (partial) action needs a basepoint")
            if truncation_radius is None:
                raise InvalidAction("a truncated (partial) action needs a truncation_radius")
        self.truncation_radius = truncation_radius
        self._elements = None
        self._index = None

    def _validate(self, name: str, perm) -> tuple:
        g = self.graph
        perm = tuple(None if p is None else int(p) for p in perm)
        if len(perm) != g.n:
            raise InvalidAction(f"generator {name} has {len(perm)} entries, graph has {g.n} vertices")
        images = [p for p in perm if p is not None]
        if any(not 0 <= p < g.n for p in images):
            raise InvalidAction(f"generator {name} maps outside the graph")
        if len(set(images)) != len(images):
            raise InvalidAction(f"generator {name} is not injective")
        edges = set(g.edges)
        for u, v in g.edges:
            a, b = perm[u], perm[v]
            if a is not None and b is not None and (min(a, b), max(a, b)) not in edges:
                raise InvalidAction(f"generator {name} breaks the edge ({u},{v})")
        return perm

    def __repr__(self):
        kind = "finite" if self.is_total else f"truncated(r={self.truncation_radius})"
        return f"GroupAction({kind}, generators={list(self.generators)})"

    # -- elements --------------------------------------------------------

    def _key(self, perm: tuple):
        return perm if self.is_total else perm[self.basepoint]

    def elements(self) -> list[GroupElement]:
        """All (truncated) group elements in BFS order over words; identity first."""
        if self._elements is None:
            ident = GroupElement(tuple(range(self.graph.n)))
            found = [ident]
            index = {self._key(ident.perm): ident}
            queue = deque([ident])
            while queue:
                g = queue.popleft()
                for name, s in self.generators.items():
                    perm = _compose(s, g.perm)
                    key = self._key(perm)
                    if key is None or key in index:
                        continue
                    e = GroupElement(perm, g.word + (name,))
                    index[key] = e
                    found.append(e)
                    queue.append(e)
                    if len(found) > self.max_elements:
                        raise TooLarge(f"group has more than {self.max_elements} elements")
            self._elements = found
            self._index = index
        return self._elements

    @property
    def identity(self) -> GroupElement:
        return self.elements()[0]

    @property
    def order(self) -> int:
        return len(self.elements())

    def lookup(self, perm: tuple) -> GroupElement:
        self.elements()
        key = self._key(perm)
        try:
            return self._index[key]
        except KeyError:
            raise TruncationTooSmall("product leaves the truncated group") from None

    def compose(self, a: GroupElement, b: GroupElement) -> GroupElement:
        """``a o b``: act by ``b`` first."""
        perm = _compose(a.perm, b.perm)
        if self._key(perm) is None:
            raise TruncationTooSmall("product leaves the truncated group")
        return self.lookup(perm)

    def inverse(self, a: GroupElement) -> GroupElement:
        inv = _invert(a.perm)
        if self._key(inv) is None:
            raise TruncationTooSmall("inverse leaves the truncated group")
        return self.lookup(inv)

    def act(self, g: GroupElement, v: int) -> int:
        img = g.perm[v]
        if img is None:
            raise SupportOutsideModel(f"{g!r} sends vertex {v} outside the model")
        return img

    def orbit(self, v: int) -> list[int]:
        return sorted({g.perm[v] for g in self.elements() if g.perm[v] is not None})

    def stabilizer(self, v: int) -> list[GroupElement]:
        return [g for g in self.elements() if g.perm[v] == v]

    def transporter(self, x: int, source: int) -> GroupElement:
        """First element in BFS order sending ``source`` to ``x``."""
        for g in self.elements():
            if g.perm[source] == x:
                return g
        raise InvalidInput(f"{x} is not in the orbit of {source}")

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        doc = {
            "generators": [
                {"name": name, "perm": list(perm)}
                for name, perm in self.generators.items()
                if not name.endswith("^-1")
            ]
        }
        if self.basepoint is not None:
            doc["basepoint"] = self.basepoint
        if self.truncation_radius is not None:
            doc["truncation_radius"] = self.truncation_radius
        return doc

    @classmethod
    def from_json(cls, graph: MedianGraph, doc: dict, basepoint: int | None = None) -> "GroupAction":
        try:
            gens = {g["name"]: g["perm"] for g in doc.get("generators", [])}
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed generator list: {exc}") from exc
        bp = doc.get("basepoint", basepoint)
        return cls(graph, gens, basepoint=bp, truncation_radius=doc.get("truncation_radius"))


def trivial_action(graph: MedianGraph, basepoint: int | None = None) -> GroupAction:
    return GroupAction(graph, {}, basepoint=basepoint)


# -- augmentation ----------------------------------------------------------


def augment_free_basepoint(graph: MedianGraph, action: GroupAction, x0: int):
    """Attach a pendant ``(x, k)`` to every orbit point ``x`` of ``x0`` and every ``k`` in stab(x).

    The action extends by ``g.(x, k) = (gx, g k h_x h_{gx}^-1)`` where ``h_x``
    is the first element (BFS order) sending ``x0`` to ``x``.  Returns the
    augmented graph, the extended action and the pendant ``(x0, 1)``, whose
    stabiliser is trivial.
    """
    if not action.is_total:
        raise OrbitNotClosed("augmentation needs a finite action; the truncation may cut the orbit")
    if action.graph is not graph:
        raise InvalidInput("action does not act on this graph")
    orbit = action.orbit(x0)
    h = {x: action.transporter(x, x0) for x in orbit}
    pendants = []  # (x, k)
    for x in orbit:
        for k in action.stabilizer(x):
            pendants.append((x, k))
    pid = {(x, k.perm): graph.n + i for i, (x, k) in enumerate(pendants)}
    edges = list(graph.edges) + [(x, pid[(x, k.perm)]) for x, k in pendants]
    labels = [graph.label(v) for v in range(graph.n)] + [
        ("pendant", graph.label(x), k.name) for x, k in pendants
    ]
    new_graph = verify_median_graph(graph.n + len(pendants), edges, labels)

    new_gens = {}
    for name, perm in action.generators.items():
        g = action.lookup(perm)
        image = list(perm) + [None] * len(pendants)
        for x, k in pendants:
            gx = g.perm[x]
            label = action.compose(
                action.compose(action.compose(g, k), h[x]), action.inverse(h[gx])
            )
            image[pid[(x, k.perm)]] = pid[(gx, label.perm)]
        new_gens[name] = image
    base = pid[(x0, action.identity.perm)]
    new_action = GroupAction(new_graph, new_gens, basepoint=base, max_elements=action.max_elements)
    return new_graph, new_action, base


# -- the wreath product acting on wreaths ------------------------------------


@dataclass(frozen=True)
class WreathElement:
    """``(h, psi)`` with ``psi`` keyed by points ``g.y0`` of the base orbit."""

    h: GroupElement
    psi: tuple = ()

    def psi_map(self) -> dict:
        return dict(self.psi)

    def __repr__(self):
        lamps = ", ".join(f"{y}:{g.name}" for y, g in self.psi)
        return f"({self.h.name}; {{{lamps}}})"


class WreathModel:
    """A wreath space together with ``G`` acting on the lamps and ``H`` on the base."""

    def __init__(self, space: WreathSpace, G: GroupAction, H: GroupAction):
        if G.graph is not space.X or H.graph is not space.Y:
            raise InvalidInput("actions must act on the lamp and base graphs of the space")
        for action, bp, what in ((G, space.x0, "x0"), (H, space.y0, "y0")):
            if action.basepoint is None:
                action.basepoint = bp
            elif action.basepoint != bp:
                raise InvalidInput(f"action basepoint differs from {what}")
        self.space, self.G, self.H = space, G, H

    @property
    def orbit_points(self) -> list[int]:
        return self.H.orbit(self.space.y0)

    def basepoints_free(self) -> bool:
        ok = True
        if self.G.is_total:
            ok &= len(self.G.stabilizer(self.space.x0)) == 1
        if self.H.is_total:
            ok &= len(self.H.stabilizer(self.space.y0)) == 1
        return ok

    def identity(self) -> WreathElement:
        return WreathElement(self.H.identity)

    def element(self, h: GroupElement, psi=None) -> WreathElement:
        psi = dict(psi or {})
        orbit = set(self.orbit_points)
        for y in psi:
            if y not in orbit:
                raise InvalidInput(f"lamp coordinate {y} is not in the orbit of y0")
        items = tuple(sorted((int(y), g) for y, g in psi.items() if not g.is_identity))
        return WreathElement(h, items)

    def generators(self) -> list[WreathElement]:
        y0 = self.space.y0
        out = []
        for name, perm in self.H.generators.items():
            out.append(WreathElement(self.H.lookup(perm)))
        for name, perm in self.G.generators.items():
            out.append(WreathElement(self.H.identity, ((y0, self.G.lookup(perm)),)))
        return out

    def multiply(self, e1: WreathElement, e2: WreathElement) -> WreathElement:
        """Group law: ``(h1, psi1)(h2, psi2) = (h1 h2, y -> psi1(y) psi2(h1^-1 y))``."""
        G, H = self.G, self.H
        combined = dict(e1.psi)
        for y2, g2 in e2.psi:
            y = H.act(e1.h, y2)
            combined[y] = G.compose(combined.get(y, G.identity), g2)
        return self.element(H.compose(e1.h, e2.h), combined)

    def inverse(self, e: WreathElement) -> WreathElement:
        G, H = self.G, self.H
        h_inv = H.inverse(e.h)
        return self.element(h_inv, {H.act(h_inv, y): G.inverse(g) for y, g in e.psi})

    def enumerate_elements(self, bound: int = 200_000) -> list[WreathElement]:
        """All of ``G wr H`` on the (truncated) model."""
        G, H = self.G, self.H
        orbit = self.orbit_points
        size = H.order * G.order ** len(orbit)
        if size > bound:
            raise TooLarge(f"wreath product has {size} elements, bound is {bound}")
        out = []
        for h in H.elements():
            for values in itertools.product(G.elements(), repeat=len(orbit)):
                out.append(self.element(h, dict(zip(orbit, values))))
        return out


def apply_wreath_element(model: WreathModel, e: WreathElement, w: Wreath) -> Wreath:
    """``(h, psi).(C, phi) = (hC, y -> psi(y) . phi(h^-1 y))``."""
    space, G, H = model.space, model.G, model.H
    space._check(w)
    base = 0
    for c in bits(w.base.mask):
        base |= 1 << H.act(e.h, c)
    moved = {H.act(e.h, y): x for y, x in w.lamps.overrides}
    for y, g in e.psi:
        moved[y] = G.act(g, moved.get(y, space.x0))
    return Wreath(ConvexSet(space.Y, base), Labelling.from_map(space.x0, moved))


def stabilizer(model: WreathModel, w: Wreath, bound: int = 200_000) -> list[WreathElement]:
    """Every element fixing ``w``.

    For each ``h`` with ``hC = C`` the lamp coordinates decouple: at an orbit
    point ``y`` the admissible values are the ``g`` with
    ``g . phi(h^-1 y) = phi(y)``; off the orbit ``phi`` must already be
    ``h``-invariant.
    """
    G, H = model.G, model.H
    if not (G.is_total and H.is_total):
        raise TooLarge("stabilizers are only computed for finite actions")
    space = model.space
    phi = w.lamps
    orbit = model.orbit_points
    orbit_set = set(orbit)
    out = []
    for h in H.elements():
        image = 0
        for c in bits(w.base.mask):
            image |= 1 << h.perm[c]
        if image != w.base.mask:
            continue
        h_inv = H.inverse(h)
        off_orbit = (phi.support | {h.perm[y] for y in phi.support}) - orbit_set
        if any(phi(h_inv.perm[y]) != phi(y) for y in off_orbit):
            continue
        choices = []
        for y in orbit:
            src, dst = phi(h_inv.perm[y]), phi(y)
            choices.append([g for g in G.elements() if g.perm[src] == dst])
        total = 1
        for c in choices:
            total *= len(c)
        if total > bound:
            raise TooLarge(f"stabilizer has more than {bound} elements")
        for values in itertools.product(*choices):
            out.append(model.element(h, dict(zip(orbit, values))))
    return out


def properness_ball(model: WreathModel, R: int, strict: bool = True) -> set[WreathElement]:
    """Elements moving ``({y0}, xi)`` by at most ``R``.

    Candidates are pruned in three stages: ``d(y0, h y0) <= R/2``, support
    points within ``R/2`` of ``y0``, lamp displacements within the remaining
    budget; survivors are confirmed by evaluating the distance exactly.  With
    ``strict`` a truncated action whose radius cannot contain a pruning bound
    raises :class:`TruncationTooSmall`; otherwise the ball is computed inside
    the truncation.
    """
    if R < 0:
        raise InvalidInput("radius must be nonnegative")
    space, G, H = model.space, model.G, model.H
    x0, y0 = space.x0, space.y0
    dX, dY = space.X.dist, space.Y.dist
    half = R // 2
    if strict:
        if H.truncation_radius is not None and half > H.truncation_radius:
            raise TruncationTooSmall(f"base pruning radius {half} exceeds truncation radius {H.truncation_radius}")
        if G.truncation_radius is not None and R > G.truncation_radius:
            raise TruncationTooSmall(f"lamp pruning radius {R} exceeds truncation radius {G.truncation_radius}")

    h_candidates = [h for h in H.elements() if dY[y0][h.perm[y0]] <= half]
    support_candidates = [y for y in model.orbit_points if dY[y0][y] <= half]
    lamp_candidates = sorted(
        (g for g in G.elements() if not g.is_identity and dX[x0][g.perm[x0]] <= R),
        key=lambda g: dX[x0][g.perm[x0]],
    )
    base = space.base_wreath()
    Y = space.Y
    found = set()

    def assign(h, points, i, psi, budget):
        if i == len(points):
            e = model.element(h, psi)
            if space.delta(apply_wreath_element(model, e, base), base) <= R:
                found.add(e)
            return
        for g in lamp_candidates:
            cost = dX[x0][g.perm[x0]]
            if cost > budget:
                break
            psi[points[i]] = g
            assign(h, points, i + 1, psi, budget - cost)
            del psi[points[i]]

    for h in h_candidates:
        for r in range(len(support_candidates) + 1):
            for subset in itertools.combinations(support_candidates, r):
                mask = (1 << y0) | (1 << h.perm[y0])
                for y in subset:
                    mask |= 1 << y
                budget = R - 2 * Y.mu(mask)
                if budget < len(subset):
                    continue
                assign(h, subset, 0, {}, budget)
    return found
