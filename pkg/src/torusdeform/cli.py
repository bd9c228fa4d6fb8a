"""Command line front end.

Subcommands:

* ``analyze FIELD``   full pipeline: critical points, symmetries, level
                      graph, classification and the symbolic diagram
* ``reeb FIELD``      critical points and the level graph only
* ``groups FIELD``    classification and the diagram report
* ``verify FIELD``    build the diagram with assigned leaves and check it
* ``wreath``          element arithmetic in a group expression

Exit codes: 0 success, 1 usage error, 2 pipeline failure (degenerate
field, coarse grid, ...), 3 verification found a counterexample.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .algebra import expr as ex
from .algebra.grammar import format_element, parse_element, parse_expr
from .deformation import (
    cyclic_leaf,
    diagram_from_classification,
    diagram_report,
    standard_leaf,
    theta_splitting_check,
    verify_diagram,
)
from .errors import IncompatibleLeaves, TorusDeformError
from .field import (
    detect_translation_symmetries,
    find_critical_points,
    load_field,
)
from .reeb import (
    F0Classification,
    build_reeb_graph,
    classification_to_dict,
    classify,
    graph_to_dict,
    to_dot,
)


def _emit_json(doc: dict, path) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_text(text: str, path) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _symmetry_dict(sym) -> dict:
    return {
        "order": sym.order,
        "smith_pair": list(sym.smith_pair),
        "generators": [[str(a), str(b)] for a, b in sym.generators],
        "elements": [[str(a), str(b)] for a, b in sym.elements],
    }


def _critical_points_dict(cps) -> list:
    return [
        {
            "x": round(c.point.x, 9),
            "y": round(c.point.y, 9),
            "value": round(c.value, 9),
            "kind": c.kind,
        }
        for c in cps
    ]


def _run_pipeline(args):
    spec = load_field(args.field)
    cps = find_critical_points(spec, grid=args.grid, tol=args.tol)
    sym = detect_translation_symmetries(spec, tol=args.tol)
    graph = build_reeb_graph(spec, cps, resolution=args.grid)
    return spec, cps, sym, graph


def _load_leaf_specs(path):
    if path is None:
        return None
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, list):
        raise IncompatibleLeaves(
            "leaf file must hold a JSON list of {order, step} objects")
    return data


def _assigned_leaves(cls, leaf_specs):
    """Shape leaf specs (or the standard default) to the classification."""
    if isinstance(cls, F0Classification):
        shape = [cls.r]
        labels = [[f"D{i + 1}" for i in range(cls.r)]]
    else:
        shape = [c.count for c in cls.decomposition.classes]
        labels = [[f"D{i + 1}_{j + 1}" for j in range(c)]
                  for i, c in enumerate(shape)]
    total = sum(shape)
    if leaf_specs is not None and len(leaf_specs) != total:
        raise IncompatibleLeaves(
            f"{len(leaf_specs)} leaf specs for {total} slots")
    rows = []
    flat_index = 0
    for i, c in enumerate(shape):
        row = []
        for j in range(c):
            label = labels[i][j]
            if leaf_specs is None:
                row.append(standard_leaf(label))
            else:
                spec = leaf_specs[flat_index]
                row.append(cyclic_leaf(label, int(spec["order"]),
                                       int(spec["step"])))
            flat_index += 1
        rows.append(row)
    if isinstance(cls, F0Classification):
        return rows[0]
    return rows


# ---------------------------------------------------------------------------
# handlers


def _cmd_analyze(args) -> int:
    spec, cps, sym, graph = _run_pipeline(args)
    cls = classify(spec, graph, sym, cyclic_override=args.cyclic_index)
    diagram = diagram_from_classification(cls)
    doc = {
        "critical_points": _critical_points_dict(cps),
        "symmetry": _symmetry_dict(sym),
        "graph": graph_to_dict(graph),
        "classification": classification_to_dict(cls),
        "diagram": diagram_report(diagram),
    }
    _emit_json(doc, args.json)
    if args.dot:
        _emit_text(to_dot(graph), args.dot)
    return 0


def _cmd_reeb(args) -> int:
    spec, cps, sym, graph = _run_pipeline(args)
    doc = {
        "critical_points": _critical_points_dict(cps),
        "graph": graph_to_dict(graph),
    }
    _emit_json(doc, args.json)
    if args.dot:
        _emit_text(to_dot(graph), args.dot)
    return 0


def _cmd_groups(args) -> int:
    spec, cps, sym, graph = _run_pipeline(args)
    cls = classify(spec, graph, sym, cyclic_override=args.cyclic_index)
    leaves = _load_leaf_specs(args.leaves)
    if leaves is None:
        diagram = diagram_from_classification(cls)
    else:
        diagram = diagram_from_classification(
            cls, _assigned_leaves(cls, leaves))
    doc = {
        "classification": classification_to_dict(cls),
        "diagram": diagram_report(diagram),
    }
    _emit_json(doc, args.json)
    return 0


def _cmd_verify(args) -> int:
    spec, cps, sym, graph = _run_pipeline(args)
    cls = classify(spec, graph, sym, cyclic_override=args.cyclic_index)
    leaf_specs = _load_leaf_specs(args.leaves)
    diagram = diagram_from_classification(
        cls, _assigned_leaves(cls, leaf_specs))
    report = verify_diagram(diagram, trunc=args.trunc)
    doc = {
        "classification": classification_to_dict(cls),
        "diagram": diagram_report(diagram, report),
    }
    if not isinstance(cls, F0Classification):
        decomp = diagram.parameters["decomposition"]
        split = theta_splitting_check(diagram.parameters["n"], decomp)
        doc["splitting"] = {
            "lattice_rank": split.lattice_rank,
            "diagonal": list(split.diagonal),
            "torsion_free": split.torsion_free,
            "complement_rank": split.complement_rank,
        }
    _emit_json(doc, args.json)
    if not report.ok:
        bad = report.counterexamples()
        print("verification failed: "
              + json.dumps(bad, sort_keys=True), file=sys.stderr)
        return 3
    return 0


def _cmd_wreath(args) -> int:
    # every input here is a literal typed by the user, so parse failures
    # are usage errors rather than pipeline errors
    if args.batch:
        lines = Path(args.batch).read_text(encoding="utf-8").splitlines()
        for raw in lines:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split("|")]
            if len(parts) != 3:
                print(f"error: batch line needs EXPR|A|B, got {line!r}",
                      file=sys.stderr)
                return 1
            try:
                expr = parse_expr(parts[0])
                a = parse_element(parts[1], expr)
                b = parse_element(parts[2], expr)
            except (ValueError, TorusDeformError) as err:
                print(f"error: bad batch line {line!r}: {err}",
                      file=sys.stderr)
                return 1
            sys.stdout.write(
                format_element(ex.multiply(expr, a, b)) + "\n")
        return 0
    if not args.expr or not args.a:
        print("error: wreath needs --expr and -a (or --batch FILE)",
              file=sys.stderr)
        return 1
    try:
        expr = parse_expr(args.expr)
        a = parse_element(args.a, expr)
        b = None if args.b is None else parse_element(args.b, expr)
    except (ValueError, TorusDeformError) as err:
        print(f"error: bad expression or element literal: {err}",
              file=sys.stderr)
        return 1
    if args.inverse:
        if args.b is not None:
            print("error: --inverse takes a single element", file=sys.stderr)
            return 1
        sys.stdout.write(format_element(ex.invert(expr, a)) + "\n")
        return 0
    if args.b is None:
        print("error: wreath needs -b (or --inverse)", file=sys.stderr)
        return 1
    sys.stdout.write(format_element(ex.multiply(expr, a, b)) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_pipeline_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("field", help="field file (JSON or TOML)")
    p.add_argument("--grid", type=int, default=128,
                   help="sweep resolution (default 128)")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="numeric tolerance (default 1e-9)")
    p.add_argument("--json", default=None, metavar="PATH",
                   help="write the JSON document here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusdeform",
        description="Morse functions on the flat torus: level graphs, "
                    "translation symmetries and deformation group diagrams.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline report")
    _add_pipeline_args(p)
    p.add_argument("--cyclic-index", type=int, default=None,
                   help="override the computed cyclic index")
    p.add_argument("--dot", default=None, metavar="PATH",
                   help="write the level graph in DOT format")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("reeb", help="level graph only")
    _add_pipeline_args(p)
    p.add_argument("--dot", default=None, metavar="PATH",
                   help="write the level graph in DOT format")
    p.set_defaults(handler=_cmd_reeb)

    p = sub.add_parser("groups", help="classification and diagram")
    _add_pipeline_args(p)
    p.add_argument("--cyclic-index", type=int, default=None,
                   help="override the computed cyclic index")
    p.add_argument("--leaves", default=None, metavar="PATH",
                   help="JSON list of {order, step} leaf specs")
    p.set_defaults(handler=_cmd_groups)

    p = sub.add_parser("verify", help="check the diagram on a finite window")
    _add_pipeline_args(p)
    p.add_argument("--cyclic-index", type=int, default=None,
                   help="override the computed cyclic index")
    p.add_argument("--leaves", default=None, metavar="PATH",
                   help="JSON list of {order, step} leaf specs "
                        "(default: 2Z_4 -> Z_4 -> Z_2 everywhere)")
    p.add_argument("--trunc", type=int, default=4,
                   help="truncation window radius (default 4)")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("wreath", help="group element arithmetic")
    p.add_argument("-e", "--expr", default=None,
                   help="group expression, e.g. 'wrC(Z_2;3)'")
    p.add_argument("-a", default=None, metavar="ELEM",
                   help="left element literal, e.g. '((1,0,1),2)'")
    p.add_argument("-b", default=None, metavar="ELEM",
                   help="right element literal")
    p.add_argument("--inverse", action="store_true",
                   help="print the inverse of -a instead of a product")
    p.add_argument("--batch", default=None, metavar="PATH",
                   help="file of EXPR|A|B lines, one product per line")
    p.set_defaults(handler=_cmd_wreath)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.handler(args)
    except TorusDeformError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
