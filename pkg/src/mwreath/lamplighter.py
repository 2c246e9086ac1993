"""Wreaths over the square grid: rectangles plus integer lamp configurations.

Rectangle corners sit in ``1/2 + Z``; coordinates are stored doubled, so
every stored corner coordinate is odd.  A side move translates one side by
one unit (two in doubled coordinates).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import EmptySet, InvalidInput

Point = tuple


@dataclass(frozen=True, order=True)
class Rectangle:
    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int

    def __post_init__(self):
        coords = (self.x_lo, self.x_hi, self.y_lo, self.y_hi)
        if any(c % 2 == 0 for c in coords):
            raise InvalidInput(f"doubled corner coordinates must be odd, got {coords}")
        if self.x_lo >= self.x_hi or self.y_lo >= self.y_hi:
            raise InvalidInput(f"degenerate rectangle {coords}")

    @classmethod
    def from_interior(cls, x_min: int, x_max: int, y_min: int, y_max: int) -> "Rectangle":
        """Rectangle whose interior grid points are ``[x_min, x_max] x [y_min, y_max]``."""
        return cls(2 * x_min - 1, 2 * x_max + 1, 2 * y_min - 1, 2 * y_max + 1)

    @classmethod
    def unit_cell(cls, x: int = 0, y: int = 0) -> "Rectangle":
        return cls.from_interior(x, x, y, y)

    @property
    def interior_ranges(self) -> tuple[int, int, int, int]:
        return (self.x_lo + 1) // 2, (self.x_hi - 1) // 2, (self.y_lo + 1) // 2, (self.y_hi - 1) // 2

    def interior(self) -> list[Point]:
        a, b, c, d = self.interior_ranges
        return [(x, y) for x in range(a, b + 1) for y in range(c, d + 1)]

    def contains(self, p: Point) -> bool:
        a, b, c, d = self.interior_ranges
        return a <= p[0] <= b and c <= p[1] <= d

    def translate(self, p: Point) -> "Rectangle":
        dx, dy = 2 * p[0], 2 * p[1]
        return Rectangle(self.x_lo + dx, self.x_hi + dx, self.y_lo + dy, self.y_hi + dy)

    def corners(self) -> tuple:
        return tuple(Fraction(c, 2) for c in (self.x_lo, self.x_hi, self.y_lo, self.y_hi))


@dataclass(frozen=True)
class GridConfig:
    """Finitely supported map ``Z^2 -> Z`` stored without zero entries."""

    entries: tuple = ()
    _map: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_map", dict(self.entries))

    @classmethod
    def from_map(cls, mapping) -> "GridConfig":
        items = mapping.items() if hasattr(mapping, "items") else mapping
        return cls(tuple(sorted(((int(p[0]), int(p[1])), int(v)) for p, v in items if v != 0)))

    def __call__(self, p: Point) -> int:
        return self._map.get(p, 0)

    @property
    def support(self) -> frozenset:
        return frozenset(self._map)

    def add(self, other: "GridConfig") -> "GridConfig":
        out = dict(self._map)
        for p, v in other.entries:
            out[p] = out.get(p, 0) + v
        return GridConfig.from_map(out)

    def shift(self, p: Point) -> "GridConfig":
        """The configuration ``q -> self(q - p)``."""
        return GridConfig.from_map({(q[0] + p[0], q[1] + p[1]): v for q, v in self.entries})


@dataclass(frozen=True)
class GridWreath:
    rect: Rectangle
    config: GridConfig = GridConfig()


def hyperplane_count(items) -> int:
    """Number of grid lines ``x = k + 1/2`` or ``y = k + 1/2`` separating two points.

    ``items`` mixes grid points and rectangles (a rectangle contributes its
    interior points).
    """
    xs_lo = ys_lo = None
    xs_hi = ys_hi = None
    for item in items:
        if isinstance(item, Rectangle):
            a, b, c, d = item.interior_ranges
        else:
            a = b = int(item[0])
            c = d = int(item[1])
        xs_lo = a if xs_lo is None else min(xs_lo, a)
        xs_hi = b if xs_hi is None else max(xs_hi, b)
        ys_lo = c if ys_lo is None else min(ys_lo, c)
        ys_hi = d if ys_hi is None else max(ys_hi, d)
    if xs_lo is None:
        raise EmptySet("hyperplane count of an empty set")
    return (xs_hi - xs_lo) + (ys_hi - ys_lo)


def tc(R1: Rectangle, F, R2: Rectangle) -> int:
    """``2 #H(R1 u R2 u F) - #H(R1) - #H(R2)``: moves needed to go from R1 to R2 while covering F."""
    return 2 * hyperplane_count([R1, R2, *F]) - hyperplane_count([R1]) - hyperplane_count([R2])


def tc_table(rects, F) -> np.ndarray:
    """``tc(R1, F, R2)`` for every pair drawn from ``rects``, as an array indexed ``[R1, R2]``."""
    r = np.array([rect.interior_ranges for rect in rects], dtype=np.int64)
    x_lo, x_hi, y_lo, y_hi = r.T
    own = (x_hi - x_lo) + (y_hi - y_lo)
    fx = [p[0] for p in F]
    fy = [p[1] for p in F]
    ax_lo = np.minimum.outer(x_lo, x_lo)
    ax_hi = np.maximum.outer(x_hi, x_hi)
    ay_lo = np.minimum.outer(y_lo, y_lo)
    ay_hi = np.maximum.outer(y_hi, y_hi)
    if F:
        ax_lo = np.minimum(ax_lo, min(fx))
        ax_hi = np.maximum(ax_hi, max(fx))
        ay_lo = np.minimum(ay_lo, min(fy))
        ay_hi = np.maximum(ay_hi, max(fy))
    union = (ax_hi - ax_lo) + (ay_hi - ay_lo)
    return 2 * union - own[:, None] - own[None, :]


def grid_delta(w1: GridWreath, w2: GridWreath) -> int:
    diff = w1.config.support | w2.config.support
    diff = [p for p in diff if w1.config(p) != w2.config(p)]
    lamps = sum(abs(w1.config(p) - w2.config(p)) for p in diff)
    return tc(w1.rect, diff, w2.rect) + lamps


def elementary_moves(w: GridWreath) -> list[GridWreath]:
    """One side translated by one unit, or one interior lamp changed by one."""
    out = []
    r = w.rect
    coords = [r.x_lo, r.x_hi, r.y_lo, r.y_hi]
    for i in range(4):
        for step in (-2, 2):
            c = list(coords)
            c[i] += step
            if c[0] < c[1] and c[2] < c[3]:
                out.append(GridWreath(Rectangle(*c), w.config))
    for p in r.interior():
        for step in (-1, 1):
            out.append(GridWreath(r, w.config.add(GridConfig.from_map({p: step}))))
    return out


def grid_action(p: Point, psi: GridConfig, w: GridWreath) -> GridWreath:
    """``(p, psi).(R, phi) = (R + p, q -> psi(q) + phi(q - p))``."""
    return GridWreath(w.rect.translate(p), psi.add(w.config.shift(p)))


def grid_multiply(a: tuple, b: tuple) -> tuple:
    """Product in ``Z wr Z^2`` of elements ``(p, psi)``, matching :func:`grid_action`."""
    (p1, psi1), (p2, psi2) = a, b
    return (p1[0] + p2[0], p1[1] + p2[1]), psi1.add(psi2.shift(p1))


def element_wreath(p: Point, psi: GridConfig) -> GridWreath:
    """Image of the base wreath (unit cell at the origin, zero lamps) under ``(p, psi)``."""
    return grid_action(p, psi, GridWreath(Rectangle.unit_cell()))


# -- JSON literals ---------------------------------------------------------


def _half(value) -> int:
    f = Fraction(str(value))
    doubled = 2 * f
    if doubled.denominator != 1:
        raise InvalidInput(f"{value} is not a half-integer")
    return int(doubled)


def wreath_from_json(doc: dict) -> GridWreath:
    """``{"rect": [x_lo, x_hi, y_lo, y_hi], "config": [[x, y, v], ...]}``; or ``"cell": [x, y]``."""
    try:
        if "cell" in doc:
            rect = Rectangle.unit_cell(*map(int, doc["cell"]))
        else:
            rect = Rectangle(*(_half(c) for c in doc["rect"]))
        config = GridConfig.from_map({(int(x), int(y)): int(v) for x, y, v in doc.get("config", [])})
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed grid wreath {doc!r}") from exc
    return GridWreath(rect, config)


def wreath_to_json(w: GridWreath) -> dict:
    def fmt(c):
        f = Fraction(c, 2)
        return float(f)

    r = w.rect
    return {
        "rect": [fmt(r.x_lo), fmt(r.x_hi), fmt(r.y_lo), fmt(r.y_hi)],
        "config": [[p[0], p[1], v] for p, v in w.config.entries],
    }
