"""``mwreath`` command line.

Exit codes: 0 success, 1 a check failed, 2 invalid input (including bounds
that the input exceeds).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import graphs
from .actions import GroupAction, augment_free_basepoint, properness_ball
from .checks import check_names, run_check_suite
from .errors import InvalidInput, IoError, MWreathError
from .io import export_dot, load_document, moves_dot, read_json
from .lamplighter import (
    GridConfig,
    GridWreath,
    Rectangle,
    elementary_moves,
    grid_action,
    grid_delta,
    tc,
    wreath_from_json,
    wreath_to_json,
)
from .oracles import bfs_oracle


def _literal(text: str):
    """A JSON literal given inline or as ``@path``."""
    if text.startswith("@"):
        return read_json(text[1:])
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"not valid JSON: {text!r} ({exc})") from exc


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


# -- verify ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    doc = load_document(args.doc)
    reports = run_check_suite(doc, args.check or None, seed=args.seed)
    if args.json:
        _emit([r.to_dict(timing=not args.no_timing) for r in reports])
    else:
        for r in reports:
            print(r.line())
            for w in r.failures:
                print("    witness:", json.dumps(w, sort_keys=True))
    return 0 if all(r.passed for r in reports) else 1


# -- wreath ---------------------------------------------------------------------


def cmd_wreath(args) -> int:
    doc = load_document(args.doc)
    space = doc.space
    if args.op == "distance":
        w1, w2 = (space.from_json(_literal(t)) for t in args.wreaths)
        print(space.delta(w1, w2))
    elif args.op == "median":
        w1, w2, w3 = (space.from_json(_literal(t)) for t in args.wreaths)
        _emit(space.to_json(space.wreath_median(w1, w2, w3)))
    elif args.op == "neighbors":
        (w,) = (space.from_json(_literal(t)) for t in args.wreaths)
        _emit([space.to_json(u) for u in space.neighbors(w)])
    elif args.op == "enumerate":
        ws = space.enumerate_wreaths(bound=doc.bounds["wreaths"])
        if args.count:
            print(len(ws))
        else:
            _emit([space.to_json(w) for w in ws])
    elif args.op == "verify":
        for text in args.wreaths:
            _emit(space.to_json(space.from_json(_literal(text))))
    return 0


_WREATH_ARITY = {"distance": 2, "median": 3, "neighbors": 1, "enumerate": 0}


# -- action -----------------------------------------------------------------------


def _load_action(path):
    doc = read_json(path)
    if not isinstance(doc, dict) or "graph" not in doc:
        raise InvalidInput("an action document needs a 'graph' and 'generators'")
    g = graphs.from_json(doc["graph"])
    return g, GroupAction.from_json(g, doc)


def cmd_action(args) -> int:
    if args.op == "ball":
        doc = load_document(args.target)
        model = doc.model()
        ball = properness_ball(model, args.radius, strict=args.strict)
        if args.json:
            _emit(sorted(repr(e) for e in ball))
        else:
            print(len(ball))
        return 0
    g, action = _load_action(args.target)
    if args.op == "verify":
        _emit(
            {
                "vertices": g.n,
                "total": action.is_total,
                "order": action.order,
                "generators": sorted(action.generators),
            }
        )
    elif args.op == "orbit":
        _emit(action.orbit(args.vertex))
    elif args.op == "stabilizer":
        _emit([e.name for e in action.stabilizer(args.vertex)])
    elif args.op == "augment":
        new_graph, new_action, base = augment_free_basepoint(g, action, args.vertex)
        out = {"graph": graphs.to_json(new_graph), **new_action.to_json(), "basepoint": base}
        _emit(out)
    return 0


# -- lamplighter ------------------------------------------------------------------


def _rect(text) -> Rectangle:
    value = _literal(text)
    if isinstance(value, list):
        value = {"rect": value}
    return wreath_from_json(value).rect


def cmd_lamplighter(args) -> int:
    if args.op == "distance":
        if len(args.items) != 2:
            raise InvalidInput("distance needs two grid wreaths")
        w1, w2 = (wreath_from_json(_literal(t)) for t in args.items)
        print(grid_delta(w1, w2))
    elif args.op == "tc":
        if len(args.items) != 3:
            raise InvalidInput("tc needs R1 F R2")
        R1, R2 = _rect(args.items[0]), _rect(args.items[2])
        F = [tuple(map(int, p)) for p in _literal(args.items[1])]
        print(tc(R1, F, R2))
    elif args.op == "ball":
        if len(args.items) != 1:
            raise InvalidInput("ball needs a radius")
        radius = int(args.items[0])
        if radius > 5 and not args.force:
            raise InvalidInput("radius above 5; pass --force to go further")
        base = GridWreath(Rectangle.unit_cell())
        dist = bfs_oracle(elementary_moves, base, radius=radius)
        sizes = [0] * (radius + 1)
        for d in dist.values():
            sizes[d] += 1
        _emit({"radius": radius, "size": len(dist), "by_depth": sizes})
        if args.dot:
            text = moves_dot(sorted(dist, key=lambda w: (dist[w], repr(w))), elementary_moves,
                             label=lambda w: json.dumps(wreath_to_json(w)))
            try:
                with open(args.dot, "w") as fh:
                    fh.write(text)
            except OSError as exc:
                raise IoError(f"cannot write {args.dot}: {exc}") from exc
    elif args.op == "action":
        if len(args.items) != 3:
            raise InvalidInput("action needs p psi w")
        p = tuple(map(int, _literal(args.items[0])))
        psi = GridConfig.from_map({(int(x), int(y)): int(v) for x, y, v in _literal(args.items[1])})
        w = wreath_from_json(_literal(args.items[2]))
        _emit(wreath_to_json(grid_action(p, psi, w)))
    return 0


# -- export-dot -------------------------------------------------------------------


def cmd_export_dot(args) -> int:
    doc = load_document(args.doc)
    if args.graph == "wreaths":
        export_dot(doc.space, args.out)
    else:
        g = doc.X if args.graph == "lamp" else doc.Y
        export_dot(g, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mwreath", description="Wreaths over median graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the property checks on a model document")
    v.add_argument("doc")
    v.add_argument("--check", action="append", choices=check_names(), help="repeatable")
    v.add_argument("--seed", type=int)
    v.add_argument("--json", action="store_true")
    v.add_argument("--no-timing", action="store_true", help="omit durations from JSON output")
    v.set_defaults(fn=cmd_verify)

    w = sub.add_parser("wreath", help="operations on the space of wreaths of a document")
    w.add_argument("op", choices=["distance", "median", "neighbors", "enumerate", "verify"])
    w.add_argument("doc")
    w.add_argument("wreaths", nargs="*", help='JSON literals {"base": [...], "lamps": {...}} or @file')
    w.add_argument("--count", action="store_true", help="enumerate: print only the count")
    w.set_defaults(fn=cmd_wreath)

    a = sub.add_parser("action", help="group actions on graphs and wreaths")
    a.add_argument("op", choices=["verify", "augment", "orbit", "stabilizer", "ball"])
    a.add_argument("target", help="action document, or model document for 'ball'")
    a.add_argument("vertex", nargs="?", type=int, default=0)
    a.add_argument("--radius", type=int, default=2)
    a.add_argument("--strict", action="store_true")
    a.add_argument("--json", action="store_true")
    a.set_defaults(fn=cmd_action)

    g = sub.add_parser("lamplighter", help="rectangles and lamps on the square grid")
    g.add_argument("op", choices=["distance", "tc", "ball", "action"])
    g.add_argument("items", nargs="*")
    g.add_argument("--dot", help="ball: also write the move graph as DOT")
    g.add_argument("--force", action="store_true")
    g.set_defaults(fn=cmd_lamplighter)

    d = sub.add_parser("export-dot", help="write a DOT rendering of a document")
    d.add_argument("doc")
    d.add_argument("out")
    d.add_argument("--graph", choices=["wreaths", "lamp", "base"], default="wreaths")
    d.set_defaults(fn=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "wreath" and args.op in _WREATH_ARITY:
        if len(args.wreaths) != _WREATH_ARITY[args.op]:
            print(f"error: wreath {args.op} takes {_WREATH_ARITY[args.op]} wreath(s)", file=sys.stderr)
            return 2
    try:
        return args.fn(args)
    except MWreathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
