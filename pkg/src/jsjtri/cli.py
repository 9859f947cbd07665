"""Command-line interface.

Exit status: 0 on success, 2 when a verification check fails, 1 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .assemble import WIDTH_MODES, AssemblyConfig, AssemblyError, AssemblyMetadata, build_manifold
from .block import BlockConstructionError, build_block
from .graph import GraphParseError, Multigraph, complete_binary_tree, cycle_graph, complete_graph, grid, \
    parse_graph, path_graph, write_graph
from .triangulation import (StructureError, TriangulationParseError, dual_graph, read_triangulation,
                            write_triangulation)
from .verify import StructureMismatch, verify_assembly
from .widths import (DEFAULT_BUDGET, BudgetExceeded, pathwidth_exact, pathwidth_upper, treewidth_exact,
                     treewidth_lower, treewidth_upper)

log = logging.getLogger("jsjtri")

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

FAMILIES = {
    "binary-tree": complete_binary_tree,
    "grid": grid,
    "path": path_graph,
    "cycle": cycle_graph,
    "complete": complete_graph,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_graph(path: str) -> Multigraph:
    return parse_graph(_read(path))


# ------------------------------------------------------------- commands

def cmd_gen_graph(args) -> int:
    if args.family == "from-file":
        g = _load_graph(args.param)
    else:
        try:
            size = int(args.param)
        except ValueError:
            raise UsageError(f"{args.family} expects an integer parameter, got {args.param!r}") from None
        try:
            g = FAMILIES[args.family](size)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    _write(args.output, write_graph(g))
    return EXIT_OK


def cmd_block(args) -> int:
    try:
        block = build_block(args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, write_triangulation(block.triangulation))
    if args.boundary:
        doc = {"k": block.k, "fiber_slope": list(block.fiber_slope), "boundary": block.boundary_index()}
        Path(args.boundary).write_text(json.dumps(doc, indent=1) + "\n")
    log.info("block k=%d: %d tetrahedra", args.k, block.triangulation.size)
    return EXIT_OK


def cmd_build(args) -> int:
    g = _load_graph(args.graph)
    config = AssemblyConfig(K=args.K, delta_override=args.delta, width_mode=args.width_mode,
                            seed=args.seed, width_budget=args.budget)
    tri, meta = build_manifold(g, config)
    _write(args.output, write_triangulation(tri))
    meta_path = args.metadata
    if meta_path is None and args.output not in (None, "-"):
        meta_path = args.output + ".meta.json"
    if meta_path:
        Path(meta_path).write_text(meta.to_json())
    log.info("built %d tetrahedra, delta=%d, K=%d", tri.size, meta.delta, meta.K)
    return EXIT_OK


def cmd_width(args) -> int:
    text = _read(args.input)
    if text.lstrip().startswith("tri"):
        g = dual_graph(read_triangulation(text))
    else:
        g = parse_graph(text)
    if args.bounds:
        tw_u, pw_u, tw_l = treewidth_upper(g), pathwidth_upper(g), treewidth_lower(g)
        print(f"tw>={tw_l.value} tw<={tw_u.value} pw>={tw_l.value} pw<={pw_u.value}")
        return EXIT_OK
    try:
        tw, pw = treewidth_exact(g, args.budget), pathwidth_exact(g, args.budget)
    except BudgetExceeded as exc:
        raise UsageError(f"{exc} (rerun with --bounds or a larger --budget)") from None
    print(f"tw={tw.value} pw={pw.value}")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    tri = read_triangulation(_read(args.triangulation))
    meta = AssemblyMetadata.from_json(_read(args.metadata))
    try:
        report = verify_assembly(g, tri, meta, args.budget)
    except (StructureMismatch, AssemblyError) as exc:
        print(f"jsjtri: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _write(args.output, report.to_json() if args.json else report.to_text())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_export(args) -> int:
    tri = read_triangulation(_read(args.triangulation))
    _write(args.output, write_graph(dual_graph(tri)) if args.dual else write_triangulation(tri))
    return EXIT_OK


# --------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jsjtri", description="Triangulated 3-manifolds with a prescribed JSJ graph.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0, help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gen-graph", help="write a graph family member as an edge list")
    s.add_argument("family", choices=sorted(FAMILIES) + ["from-file"])
    s.add_argument("param", help="height, side or size; a path for from-file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen_graph)

    s = sub.add_parser("block", help="write the triangulated block with k boundary tori")
    s.add_argument("k", type=int)
    s.add_argument("-o", "--output")
    s.add_argument("--boundary", help="also write boundary tori and slope bases as JSON")
    s.set_defaults(func=cmd_block)

    s = sub.add_parser("build", help="assemble the closed manifold for a graph")
    s.add_argument("graph", help="edge-list file, or - for stdin")
    s.add_argument("-o", "--output", help="triangulation path (default stdout)")
    s.add_argument("--metadata", help="metadata path (default <output>.meta.json)")
    s.add_argument("--K", type=int, default=1, help="distance constant; the true value is not known")
    s.add_argument("--delta", type=int, default=None, help="override the computed distance budget")
    s.add_argument("--width-mode", choices=WIDTH_MODES, default="auto")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="exact-solver node cap")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("width", help="treewidth and pathwidth of a graph or of a triangulation's dual graph")
    s.add_argument("input", nargs="?", default="-")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact values (default)")
    mode.add_argument("--bounds", action="store_true", help="heuristic upper and lower bounds")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(func=cmd_width)

    s = sub.add_parser("verify", help="check an assembled triangulation against its graph and metadata")
    s.add_argument("graph")
    s.add_argument("triangulation")
    s.add_argument("metadata")
    s.add_argument("--json", action="store_true", help="machine-readable report")
    s.add_argument("-o", "--output")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export", help="re-serialize a triangulation canonically")
    s.add_argument("triangulation")
    s.add_argument("-o", "--output")
    s.add_argument("--dual", action="store_true", help="write the dual graph as an edge list instead")
    s.set_defaults(func=cmd_export)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"jsjtri: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(message)s",
                        stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"jsjtri: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GraphParseError, TriangulationParseError) as exc:
        print(f"jsjtri: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AssemblyError, BlockConstructionError, StructureError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"jsjtri: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
