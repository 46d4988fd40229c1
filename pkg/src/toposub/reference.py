"""Hand-transcribed reference data for the bundled Tribonacci and tau
substitutions. Kept apart from the engines, which never read it except to
anchor or check their own output."""

from __future__ import annotations

from .cwpatch import canonical_cycle
from .topo import normalize_pair, parse_pair

# balanced-pair classes of the edge heredity graph
TRIB_EDGE_PAIRS = [
    "[A45,C54]", "[A23,B05]", "[B45,C76]", "[B01,B43]", "[C56,C98]", "[C45,C09]",
    "[C34,C10]", "[C78,C32]", "[C23,B32]", "[B34,C43]", "[C12,B21]", "[B01,C98]",
    "[A12,C09]", "[A01,C10]", "[B23,A05]", "[C12,C76]", "[B05,C78]", "[A43,C56]",
]

# chains of the configuration graph; the last arc of a chain may be a loop
TRIB_CONFIG_CHAINS = [
    ["C5,A4", "C7,B4,B0", "C1,C3,C7", "A0,B2,C1", "A0,B2,C1"],
    ["C5,C9", "C7,B4,C3", "C1,C3,B2", "A0,B2,C1"],
    ["A1,C0", "A5,C4,B3", "B1,B3,C2", "B1,C8,C2", "B1,C8,C2"],
    ["A2,C9,B0", "C7,B4,C3"],
    ["C0,C4", "A5,C4,B3"],
    ["C6,A3,B5", "C8,B5,C6", "C2,C6,C8", "B1,C8,C2"],
]

TRIB_DIVIDED = {"C0", "C5"}

# tile types and positions around the vertices of valence 3 (position of the
# tile drawn at p, before the per-type offset is added)
TRIB_VERTEX_SHAPES = [
    [("A", (0, 0, 0)), ("B", (0, 0, 0)), ("C", (0, 0, 0))],
    [("A", (0, 0, 0)), ("B", (0, 2, -3)), ("C", (2, -1, -2))],
    [("A", (0, 0, 0)), ("B", (0, 0, 0)), ("C", (2, -1, -2))],
    [("A", (0, -2, 3)), ("B", (0, 0, 0)), ("C", (0, -2, 3))],
    [("B", (0, 0, 0)), ("B", (-1, 0, 2)), ("C", (0, 0, 0))],
    [("B", (0, 0, 0)), ("B", (-1, 0, 2)), ("C", (1, -3, 3))],
    [("B", (-1, 0, 2)), ("C", (0, 0, 0)), ("C", (-1, 0, 2))],
    [("B", (-2, 3, -1)), ("C", (0, 0, 0)), ("C", (-1, 0, 2))],
    [("B", (-2, 1, 2)), ("C", (0, 0, 0)), ("C", (0, -2, 3))],
    [("B", (0, 0, 0)), ("C", (0, 0, 0)), ("C", (0, -2, 3))],
    [("C", (0, 0, 0)), ("C", (-1, 2, -1)), ("C", (-1, 0, 2))],
    [("C", (0, 0, 0)), ("C", (-1, 2, -1)), ("C", (0, 2, -3))],
]
# offset between where a tile is drawn and where its position vector points
DRAW_OFFSET = {"A": (0, 0, 0), "B": (0, -1, 1), "C": (-1, 0, 1)}

TAU_COUNTS_FROM_A = [1, 2, 3, 4, 6, 9]

TRIB_TILE_COUNTS = [1, 3, 5, 9, 17, 31, 57, 105]
FACET_COUNTS = [3, 5, 9, 17, 31, 57, 105, 193, 355]


def edge_pairs():
    return {normalize_pair(parse_pair(x)) for x in TRIB_EDGE_PAIRS}


def config_arcs():
    arcs: dict[tuple, set] = {}
    for chain in TRIB_CONFIG_CHAINS:
        cfgs = [canonical_cycle(tuple(c.split(","))) for c in chain]
        for a in cfgs:
            arcs.setdefault(a, set())
        for a, b in zip(cfgs, cfgs[1:]):
            arcs[a].add(b)
    return arcs


def reference_vertex_shapes():
    """Reference shapes with each tile moved to its position vector."""
    from .position import normalize_shape

    out = set()
    for shape in TRIB_VERTEX_SHAPES:
        items = [(t, tuple(a + b for a, b in zip(p, DRAW_OFFSET[t]))) for t, p in shape]
        out.add(normalize_shape(items))
    return out
