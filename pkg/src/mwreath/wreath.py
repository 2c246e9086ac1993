"""The space of wreaths over a lamp graph X and a base graph Y.

A wreath is a pair ``(C, phi)``: a convex set ``C`` of Y and a labelling
``phi: Y -> X`` equal to the basepoint ``x0`` outside a finite support.  The
distance between two wreaths is

    2 * mu(C1 u C2 u D) - mu(C1) - mu(C2) + sum_y d_X(phi1(y), phi2(y))

where ``D`` is the set of base points at which the labellings differ.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .convex import enumerate_convex
from .errors import AmbientMismatch, InvalidInput, TooLarge
from .median import ConvexSet, MedianGraph, bits, mask_of, popcount, sort_key


@dataclass(frozen=True)
class Labelling:
    """A finitely supported map Y -> X stored as its non-default entries."""

    default: int
    overrides: tuple = ()
    _map: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_map", dict(self.overrides))

    @classmethod
    def from_map(cls, default: int, mapping) -> "Labelling":
        items = mapping.items() if hasattr(mapping, "items") else mapping
        return cls(default, tuple(sorted((int(y), int(x)) for y, x in items if int(x) != default)))

    def __call__(self, y: int) -> int:
        return self._map.get(y, self.default)

    def as_dict(self) -> dict:
        return dict(self._map)

    @property
    def support(self) -> frozenset:
        return frozenset(y for y, _ in self.overrides)

    def difference(self, other: "Labelling") -> frozenset:
        """Points of Y where the two labellings disagree."""
        a, b = self._map, other._map
        return frozenset(
            y for y in a.keys() | b.keys()
            if a.get(y, self.default) != b.get(y, other.default)
        )


@dataclass(frozen=True)
class Wreath:
    base: ConvexSet
    lamps: Labelling

    def __lt__(self, other):
        return (sort_key(self.base.mask), self.lamps.overrides) < (
            sort_key(other.base.mask),
            other.lamps.overrides,
        )

    def __repr__(self):
        return f"Wreath({list(self.base.vertices)}, {self.lamps.as_dict()})"


class WreathSpace:
    """Wreaths over a lamp graph ``X`` (basepoint ``x0``) and base graph ``Y`` (basepoint ``y0``)."""

    def __init__(self, X: MedianGraph, Y: MedianGraph, x0: int = 0, y0: int = 0):
        if not (0 <= x0 < X.n and 0 <= y0 < Y.n):
            raise InvalidInput("basepoint outside its graph")
        self.X, self.Y, self.x0, self.y0 = X, Y, x0, y0
        self.xi = Labelling(x0)

    def __repr__(self):
        return f"WreathSpace(X={self.X}, Y={self.Y}, x0={self.x0}, y0={self.y0})"

    # -- construction ----------------------------------------------------

    def labelling(self, mapping=()) -> Labelling:
        lab = Labelling.from_map(self.x0, mapping)
        for y, x in lab.overrides:
            if not (0 <= y < self.Y.n and 0 <= x < self.X.n):
                raise InvalidInput(f"lamp entry {y}->{x} outside the model")
        return lab

    def wreath(self, base, lamps=()) -> Wreath:
        if not isinstance(base, ConvexSet):
            base = self.Y.convex(base)
        if not isinstance(lamps, Labelling):
            lamps = self.labelling(lamps)
        w = Wreath(base, lamps)
        self._check(w)
        return w

    def base_wreath(self) -> Wreath:
        return Wreath(ConvexSet(self.Y, 1 << self.y0), self.xi)

    def _check(self, *ws: Wreath) -> None:
        for w in ws:
            if w.base.graph is not self.Y:
                raise AmbientMismatch("wreath base lives in another graph")
            if w.lamps.default != self.x0:
                raise AmbientMismatch("wreath lamps use another basepoint")

    def _lamp_mask(self, phi: Labelling, psi: Labelling) -> int:
        return mask_of(phi.difference(psi))

    # -- metric ----------------------------------------------------------

    def delta(self, w1: Wreath, w2: Wreath) -> int:
        self._check(w1, w2)
        Y, dX = self.Y, self.X.dist
        diff = w1.lamps.difference(w2.lamps)
        union = w1.base.mask | w2.base.mask | mask_of(diff)
        lamp_sum = sum(dX[w1.lamps(y)][w2.lamps(y)] for y in diff)
        return 2 * Y.mu(union) - Y.mu(w1.base.mask) - Y.mu(w2.base.mask) + lamp_sum

    def leaf_projection(self, phi: Labelling, w: Wreath) -> Wreath:
        """Closest point of the leaf of ``phi``: ``(hull(C u psi-diff-phi), phi)``."""
        self._check(w)
        m = self.Y.hull_mask(w.base.mask | self._lamp_mask(w.lamps, phi))
        return Wreath(ConvexSet(self.Y, m), phi)

    def wreath_median(self, w1: Wreath, w2: Wreath, w3: Wreath) -> Wreath:
        self._check(w1, w2, w3)
        X, Y = self.X, self.Y
        support = w1.lamps.support | w2.lamps.support | w3.lamps.support
        phi = Labelling.from_map(
            self.x0,
            {y: X.median_vertex(w1.lamps(y), w2.lamps(y), w3.lamps(y)) for y in support},
        )
        pools = [
            list(bits(w.base.mask | self._lamp_mask(w.lamps, phi))) for w in (w1, w2, w3)
        ]
        points = 0
        for a, b, c in itertools.product(*pools):
            points |= 1 << Y.median_vertex(a, b, c)
        return Wreath(ConvexSet(Y, Y.hull_mask(points)), phi)

    def interval_meets_leaf(self, phi: Labelling, w1: Wreath, w2: Wreath) -> bool:
        """Pointwise test ``phi(y) in I(phi1(y), phi2(y))`` for every y."""
        self._check(w1, w2)
        X = self.X
        for y in phi.support | w1.lamps.support | w2.lamps.support:
            if not (X.interval_mask(w1.lamps(y), w2.lamps(y)) >> phi(y)) & 1:
                return False
        return True

    # -- graph structure -------------------------------------------------

    def neighbors(self, w: Wreath) -> list[Wreath]:
        """Wreaths at distance exactly one.

        Candidates are single-wall changes of the base (hull with an adjacent
        vertex, or intersection with a halfspace) and single-step lamp moves at
        points of the base; each candidate is kept only if its distance is 1.
        """
        self._check(w)
        X, Y = self.X, self.Y
        C = w.base.mask
        bases = set()
        boundary = 0
        for v in bits(C):
            boundary |= Y._nbr_mask[v]
        for x in bits(boundary & ~C):
            bases.add(Y.hull_mask(C | (1 << x)))
        for wall_id in bits(w.base.crossing):
            wall = Y.walls[wall_id]
            bases.add(C & wall.mask_a)
            bases.add(C & wall.mask_b)
        candidates = [Wreath(ConvexSet(Y, m), w.lamps) for m in bases]
        current = w.lamps.as_dict()
        for y in bits(C):
            for x in X.adj[current.get(y, self.x0)]:
                lamps = dict(current)
                lamps[y] = x
                candidates.append(Wreath(w.base, Labelling.from_map(self.x0, lamps)))
        return sorted(c for c in candidates if self.delta(w, c) == 1)

    def count_wreaths(self, max_convex_vertices: int = 12) -> int:
        return len(enumerate_convex(self.Y, max_convex_vertices)) * self.X.n ** self.Y.n

    def enumerate_wreaths(self, bound: int = 200_000) -> list[Wreath]:
        """Every wreath of the finite model, ordered by base then lamps."""
        if self.X.n ** self.Y.n > bound:
            raise TooLarge(f"|X|^|Y| = {self.X.n ** self.Y.n} exceeds {bound}")
        bases = enumerate_convex(self.Y, max_vertices=max(12, self.Y.n))
        total = len(bases) * self.X.n ** self.Y.n
        if total > bound:
            raise TooLarge(f"{total} wreaths exceed the bound {bound}")
        labellings = [
            Labelling(self.x0, tuple((y, x) for y, x in enumerate(values) if x != self.x0))
            for values in itertools.product(range(self.X.n), repeat=self.Y.n)
        ]
        labellings.sort(key=lambda lab: lab.overrides)
        return [Wreath(C, lab) for C in bases for lab in labellings]

    def leaf(self, phi: Labelling) -> list[Wreath]:
        return [Wreath(C, phi) for C in enumerate_convex(self.Y, max_vertices=max(12, self.Y.n))]

    # -- serialization ---------------------------------------------------

    def to_json(self, w: Wreath) -> dict:
        return {"base": list(w.base.vertices), "lamps": {str(y): x for y, x in w.lamps.overrides}}

    def from_json(self, doc: dict) -> Wreath:
        try:
            base = [int(v) for v in doc["base"]]
            lamps = {int(y): int(x) for y, x in doc.get("lamps", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed wreath literal {doc!r}") from exc
        if any(not 0 <= v < self.Y.n for v in base):
            raise InvalidInput(f"base {base} outside the base graph")
        return self.wreath(base, lamps)

