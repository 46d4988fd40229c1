"""Command-line entry point: toposub <command> ..."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dual import TRIB_DUAL, FacetMultiset, iterate_seed, stepped_window
from .subfile import ParseError, builtin, load
from .topo import (InvalidSubstitution, Tower, check_compatibility, config_graph_dot, configuration_graph,
                   core_property, edge_graph_dot, pair_str, vertex_graph_dot, vertex_heredity_graph)

BUNDLED = ("tribonacci", "tau")

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(name: str):
    path = Path(name)
    if path.exists():
        return load(path)
    if path.stem in BUNDLED and not path.parent.parts:
        return builtin(path.stem)
    raise InputError(f"no such substitution file: {name}")


def cmd_check(args) -> int:
    presub = _load(args.file)
    res = check_compatibility(presub, args.max_levels)
    if not res.compatible:
        a, b = res.lengths
        print(f"incompatible: {pair_str(res.witness)} has image lengths {a} != {b} at level {res.level}")
        return FAILED
    cp = core_property(presub, args.max_core)
    core_txt = f"core at ({cp[0]},{cp[1]})" if cp else f"no core up to level {args.max_core}"
    print(f"compatible; |E(σ)| = {len(res.graph.nodes)} nodes; {core_txt}")
    if args.dot:
        out = Path(args.dot)
        out.mkdir(parents=True, exist_ok=True)
        (out / "edges.dot").write_text(edge_graph_dot(res.graph))
        vg = vertex_heredity_graph(presub)
        (out / "vertices.dot").write_text(vertex_graph_dot(vg))
        (out / "configurations.dot").write_text(config_graph_dot(configuration_graph(presub, args.depth)))
        print(f"divided vertices: {' '.join(sorted(vg.divided)) or '-'}; "
              f"bounded valence: {'yes' if vg.bounded_valence else 'no'}")
    return OK if cp else FAILED


def cmd_iterate(args) -> int:
    presub = _load(args.file)
    if args.tile not in presub.arities:
        raise InputError(f"unknown prototile {args.tile}")
    res = check_compatibility(presub)
    if not res.compatible:
        print(f"incompatible: {pair_str(res.witness)}")
        return FAILED
    patch = Tower(presub, args.tile).level(args.n)
    counts = " ".join(f"{t}:{k}" for t, k in patch.type_counts().items())
    print(f"faces: {len(patch)} ({counts})")
    print(f"vertices: {len(patch.vertices())} edges: {patch.n_edges()} euler: {patch.euler()}")
    if args.dump:
        sys.stdout.write(patch.dump())
    return OK


def cmd_stepped(args) -> int:
    if args.n is not None:
        mset = iterate_seed(TRIB_DUAL, args.n)
    else:
        mset = FacetMultiset.of(stepped_window(radius=args.radius))
    sys.stdout.write(mset.dump())
    return OK


def cmd_rauzy(args) -> int:
    from .geometry import rauzy_cloud
    sys.stdout.write(rauzy_cloud(args.n).dump())
    return OK


def _trib_tower():
    from .position import solve_position_table
    tower = Tower(builtin("tribonacci"), "C")
    return tower, solve_position_table(tower)


def cmd_psi(args) -> int:
    from .linkage import psi_map
    tower, table = _trib_tower()
    patch = tower.level(args.n)
    for f, (x, i) in sorted(psi_map(table, tower, args.n).items()):
        print(f"{f} {patch.faces[f].type} {x[0]} {x[1]} {x[2]} {i}")
    return OK


def cmd_omega(args) -> int:
    _, table = _trib_tower()
    sys.stdout.write(table.export())
    return OK


def cmd_verify(args) -> int:
    from .verify import SUITES, run
    suites = list(SUITES) if "all" in args.suite else args.suite
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise InputError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    failed = 0
    for outcome in run(suites):
        print(outcome.line(), flush=True)
        failed += not outcome.ok
    print(f"{failed} failure(s)")
    return FAILED if failed else OK


def cmd_render(args) -> int:
    from .geometry import COLORS, render
    kw = {"stroke": args.stroke} if args.stroke is not None else {}
    if args.colors:
        cols = args.colors.split(",")
        if len(cols) != 3:
            raise InputError("--colors takes three comma-separated colors")
        kw["colors"] = dict(zip((1, 2, 3), cols))
    else:
        kw["colors"] = COLORS
    if args.mode == "step":
        svg = render("step", radius=args.radius, **kw)
    elif args.mode == "top":
        svg = render("top", n=args.n if args.n is not None else 4, **kw)
    else:
        svg = render("frac", n=args.n if args.n is not None else 10_000, **kw)
    Path(args.out).write_text(svg)
    print(f"wrote {args.out}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toposub", description="Topological substitutions and their geometric realizations.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="compatibility, core property and heredity graphs")
    p.add_argument("file", help="substitution file, or a bundled name (tribonacci.sub, tau.sub)")
    p.add_argument("--dot", metavar="DIR", help="write edges.dot, vertices.dot and configurations.dot here")
    p.add_argument("--max-levels", type=int, default=1000)
    p.add_argument("--max-core", type=int, default=12)
    p.add_argument("--depth", type=int, default=6, help="levels explored for the configuration graph")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("iterate", help="statistics of sigma^n(tile)")
    p.add_argument("file")
    p.add_argument("--tile", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dump", action="store_true", help="print the faces and gluings")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("stepped", help="facets of E^n(U) or of the stepped surface in a box")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--radius", type=int)
    p.set_defaults(func=cmd_stepped)

    p = sub.add_parser("rauzy", help="labelled Rauzy fractal point cloud")
    p.add_argument("--n", type=int, default=10_000)
    p.set_defaults(func=cmd_rauzy)

    p = sub.add_parser("psi", help="tile to facet table for sigma^n(C)")
    p.add_argument("--n", type=int, default=4)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("omega", help="solved position table")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", nargs="+", default=["all"])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="SVG of a tiling")
    p.add_argument("--mode", choices=("top", "frac", "step"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, help="level (top) or number of points (frac)")
    p.add_argument("--radius", type=int, default=2, help="box radius (step)")
    p.add_argument("--colors", help="three colors for facet types 1,2,3")
    p.add_argument("--stroke", type=float)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ParseError, InvalidSubstitution, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
