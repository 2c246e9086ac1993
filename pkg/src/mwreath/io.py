"""Model documents (JSON) and DOT export.

A model document looks like::

    {
      "lamp_graph": {"vertices": 2, "edges": [[0, 1]]},
      "base_graph": {"family": "path", "n": 3},
      "x0": 0, "y0": 0,
      "lamp_action": {"generators": [{"name": "s", "perm": [1, 0]}]},
      "base_action": {"generators": [...], "augment": true},
      "bounds": {"product": 12, "wreaths": 200000, "triples": 200000},
      "seed": 0
    }

Graphs are either explicit (``vertices``/``edges``) or a named family.  An
action with ``"augment": true`` is replaced by its free-basepoint
augmentation, and the matching basepoint moves to the new pendant.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import graphs
from .actions import GroupAction, WreathModel, augment_free_basepoint, trivial_action
from .errors import InvalidDocument, InvalidInput, IoError, MWreathError, TooLarge
from .median import MedianGraph
from .wreath import WreathSpace

DEFAULT_BOUNDS = {"product": 12, "wreaths": 200_000, "triples": 200_000, "lamplighter_radius": 5}

_FAMILIES = {
    "single": lambda d: graphs.single_vertex(),
    "path": lambda d: graphs.path_graph(int(d["n"])),
    "cycle": lambda d: graphs.cycle_graph(int(d["n"])),
    "complete": lambda d: graphs.complete_graph(int(d["n"])),
    "grid": lambda d: graphs.grid_graph(int(d["cols"]), int(d["rows"])),
    "hypercube": lambda d: graphs.hypercube(int(d["dim"])),
    "star": lambda d: graphs.star(int(d["leaves"])),
}


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidDocument(f"{path} is not valid JSON: {exc}") from exc


def parse_graph(doc) -> MedianGraph:
    if not isinstance(doc, dict):
        raise InvalidDocument(f"graph must be an object, got {doc!r}")
    try:
        if "family" in doc:
            family = doc["family"]
            if family not in _FAMILIES:
                raise InvalidDocument(f"unknown graph family {family!r}; known: {sorted(_FAMILIES)}")
            return _FAMILIES[family](doc)
        return graphs.from_json(doc)
    except InvalidDocument:
        raise
    except InvalidInput as exc:
        raise InvalidDocument(str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidDocument(f"malformed graph {doc!r}: {exc}") from exc


@dataclass
class ModelDocument:
    X: MedianGraph
    Y: MedianGraph
    x0: int = 0
    y0: int = 0
    G: GroupAction | None = None
    H: GroupAction | None = None
    bounds: dict = field(default_factory=lambda: dict(DEFAULT_BOUNDS))
    seed: int = 0

    @property
    def space(self) -> WreathSpace:
        if getattr(self, "_space", None) is None:
            self._space = WreathSpace(self.X, self.Y, self.x0, self.y0)
        return self._space

    @property
    def has_actions(self) -> bool:
        return self.G is not None or self.H is not None

    def model(self) -> WreathModel:
        G = self.G or trivial_action(self.X, self.x0)
        H = self.H or trivial_action(self.Y, self.y0)
        return WreathModel(self.space, G, H)


def _parse_action(graph: MedianGraph, doc, basepoint: int, what: str):
    """Returns ``(graph, action, basepoint)``, augmented if requested."""
    if not isinstance(doc, dict):
        raise InvalidDocument(f"{what} must be an object")
    try:
        action = GroupAction.from_json(graph, doc, basepoint=basepoint)
    except InvalidInput as exc:
        raise InvalidDocument(f"{what}: {exc}") from exc
    if doc.get("augment"):
        try:
            graph, action, basepoint = augment_free_basepoint(graph, action, basepoint)
        except MWreathError as exc:
            raise InvalidDocument(f"{what}: cannot augment: {exc}") from exc
    return graph, action, basepoint


def parse_document(doc: dict) -> ModelDocument:
    if not isinstance(doc, dict):
        raise InvalidDocument("model document must be a JSON object")
    for key in ("lamp_graph", "base_graph"):
        if key not in doc:
            raise InvalidDocument(f"missing {key!r}")
    X = parse_graph(doc["lamp_graph"])
    Y = parse_graph(doc["base_graph"])
    try:
        x0, y0 = int(doc.get("x0", 0)), int(doc.get("y0", 0))
        seed = int(doc.get("seed", 0))
    except (TypeError, ValueError) as exc:
        raise InvalidDocument(f"basepoints and seed must be integers: {exc}") from exc
    if not 0 <= x0 < X.n:
        raise InvalidDocument(f"x0={x0} is not a vertex of the lamp graph")
    if not 0 <= y0 < Y.n:
        raise InvalidDocument(f"y0={y0} is not a vertex of the base graph")
    G = H = None
    if doc.get("lamp_action") is not None:
        X, G, x0 = _parse_action(X, doc["lamp_action"], x0, "lamp_action")
    if doc.get("base_action") is not None:
        Y, H, y0 = _parse_action(Y, doc["base_action"], y0, "base_action")
    bounds = dict(DEFAULT_BOUNDS)
    extra = doc.get("bounds", {}) or {}
    if not isinstance(extra, dict):
        raise InvalidDocument("bounds must be an object")
    for key, value in extra.items():
        if key not in DEFAULT_BOUNDS:
            raise InvalidDocument(f"unknown bound {key!r}")
        if not isinstance(value, int) or value <= 0:
            raise InvalidDocument(f"bound {key} must be a positive integer")
        bounds[key] = value
    if X.n * Y.n > bounds["product"]:
        raise InvalidDocument(
            f"|X|*|Y| = {X.n * Y.n} exceeds the product bound {bounds['product']}"
        )
    return ModelDocument(X, Y, x0, y0, G, H, bounds, seed)


def load_document(path) -> ModelDocument:
    return parse_document(read_json(path))


def document_to_json(doc: ModelDocument) -> dict:
    out = {
        "lamp_graph": graphs.to_json(doc.X),
        "base_graph": graphs.to_json(doc.Y),
        "x0": doc.x0,
        "y0": doc.y0,
        "bounds": dict(doc.bounds),
        "seed": doc.seed,
    }
    if doc.G is not None:
        out["lamp_action"] = doc.G.to_json()
    if doc.H is not None:
        out["base_action"] = doc.H.to_json()
    return out


# -- DOT -----------------------------------------------------------------------

MAX_DOT_VERTICES = 5000
_PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


def _colour(key) -> str:
    digest = hashlib.sha1(repr(key).encode()).digest()
    return _PALETTE[digest[0] % len(_PALETTE)]


def graph_dot(g: MedianGraph, name: str = "G") -> str:
    """Edges coloured by wall id."""
    if g.n > MAX_DOT_VERTICES:
        raise TooLarge(f"{g.n} vertices exceed the DOT limit {MAX_DOT_VERTICES}")
    wall_of = {}
    for wall in g.walls:
        for u, v in g.edges:
            if wall.separates(u, v):
                wall_of[(u, v)] = wall.id
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        lines.append(f'  {v} [label="{g.label(v)}"];')
    for u, v in g.edges:
        w = wall_of[(u, v)]
        lines.append(f'  {u} -- {v} [color="{_PALETTE[w % len(_PALETTE)]}", label="w{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def wreath_dot(space: WreathSpace, name: str = "W") -> str:
    """Wreath graph with nodes coloured by a hash of their lamps."""
    wreaths = space.enumerate_wreaths(bound=MAX_DOT_VERTICES)
    index = {w: i for i, w in enumerate(wreaths)}
    lines = [f"graph {name} {{"]
    for i, w in enumerate(wreaths):
        label = f"{list(w.base.vertices)} {w.lamps.as_dict()}"
        lines.append(f'  {i} [label="{label}", style=filled, fillcolor="{_colour(w.lamps.overrides)}"];')
    for i, w in enumerate(wreaths):
        for u in space.neighbors(w):
            j = index[u]
            if i < j:
                lines.append(f"  {i} -- {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def moves_dot(vertices, neighbors, label=repr, name: str = "M") -> str:
    """DOT for an explicit vertex list under a neighbour function (edges inside the list)."""
    vertices = list(vertices)
    if len(vertices) > MAX_DOT_VERTICES:
        raise TooLarge(f"{len(vertices)} vertices exceed the DOT limit {MAX_DOT_VERTICES}")
    index = {v: i for i, v in enumerate(vertices)}
    lines = [f"graph {name} {{"]
    for i, v in enumerate(vertices):
        text = label(v).replace('"', "'")
        lines.append(f'  {i} [label="{text}"];')
    for i, v in enumerate(vertices):
        for u in neighbors(v):
            j = index.get(u)
            if j is not None and i < j:
                lines.append(f"  {i} -- {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj, path=None) -> str:
    """Render a median graph or a wreath space to DOT; write it to ``path`` if given."""
    if isinstance(obj, MedianGraph):
        text = graph_dot(obj)
    elif isinstance(obj, WreathSpace):
        text = wreath_dot(obj)
    elif isinstance(obj, ModelDocument):
        text = wreath_dot(obj.space)
    else:
        raise InvalidInput(f"cannot export {type(obj).__name__} to DOT")
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc}") from exc
    return text
