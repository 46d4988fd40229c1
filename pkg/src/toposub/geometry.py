"""Plane geometry: projection to the contracting plane, Rauzy point clouds,
the hexagonal realization of the topological tiling, and SVG output."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree
from shapely.geometry import Point, Polygon
from shapely.ops import unary_union
from shapely.strtree import STRtree

from .cwpatch import Patch
from .dual import Facet, facet_corners, stepped_window
from .symbolic import PisotData, TRIBONACCI, abelianize, fixed_point_prefix, tribonacci_pisot

COLORS = {1: "#e41a1c", 2: "#377eb8", 3: "#4daf4a"}


def project(x, pisot: PisotData | None = None) -> np.ndarray:
    return (pisot or tribonacci_pisot()).project(x)


def commutation_defect(pisot: PisotData, points: np.ndarray) -> float:
    """max |pi(M x) - h pi(x)| over the given integer points."""
    lhs = pisot.project(points @ pisot.m.T)
    rhs = pisot.project(points) @ pisot.h.T
    return float(np.max(np.linalg.norm(lhs - rhs, axis=1)))


# -- Rauzy fractal -------------------------------------------------------------


@dataclass
class PointCloud:
    points: np.ndarray  # (n, 2)
    labels: np.ndarray  # (n,) in {1, 2, 3}

    def part(self, i: int) -> np.ndarray:
        return self.points[self.labels == i]

    def dump(self) -> str:
        pts = np.round(self.points, 9) + 0.0  # no negative zeros
        return "".join(f"{x:.9f} {y:.9f} {lab}\n" for (x, y), lab in zip(pts, self.labels))


def rauzy_cloud(n: int, pisot: PisotData | None = None) -> PointCloud:
    pisot = pisot or tribonacci_pisot()
    word = np.array(fixed_point_prefix(TRIBONACCI, n), dtype=np.int64)
    steps = np.zeros((n, 3), dtype=np.int64)
    steps[np.arange(n), word - 1] = 1
    prefixes = np.vstack([np.zeros((1, 3), dtype=np.int64), np.cumsum(steps, axis=0)[:-1]])
    return PointCloud(pisot.project(prefixes), word)


@dataclass
class IfsReport:
    ok: bool
    defects: dict[str, float]
    worst: dict[str, tuple[float, float]]


def ifs_check(cloud: PointCloud, tol: float = 0.05, pisot: PisotData | None = None) -> IfsReport:
    """Directed check of R1 = h R, R2 = h R1 + pi(e1), R3 = h R2 + pi(e1)."""
    pisot = pisot or tribonacci_pisot()
    h = pisot.h
    shift = pisot.project(np.array([1, 0, 0]))
    eqs = {
        "R1 = h(R1 u R2 u R3)": (cloud.points @ h.T, cloud.part(1)),
        "R2 = h R1 + pi(e1)": (cloud.part(1) @ h.T + shift, cloud.part(2)),
        "R3 = h R2 + pi(e1)": (cloud.part(2) @ h.T + shift, cloud.part(3)),
    }
    defects, worst = {}, {}
    for name, (src, target) in eqs.items():
        dist, _ = cKDTree(target).query(src)
        k = int(np.argmax(dist))
        defects[name] = float(dist[k])
        worst[name] = (float(src[k][0]), float(src[k][1]))
    return IfsReport(all(d < tol for d in defects.values()), defects, worst)


# -- hexagonal realization -----------------------------------------------------

# axial neighbour directions, counter-clockwise
DIRS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


class RealizationError(RuntimeError):
    pass


@dataclass
class HexComplex:
    """Every face a hexagon; C faces split along the chord from corner 5 to corner 0."""

    faces: list[tuple[int, str, tuple[int, ...]]]  # (source face, type, six vertex ids)
    twins: dict[tuple[int, int], tuple[int, int]]


def hex_subdivide(patch: Patch, split: str = "C") -> HexComplex:
    faces = []
    # (source face, source half-edge) -> (hex face, local edge)
    where: dict[tuple[int, int], tuple[int, int]] = {}
    twins = {}
    for f, face in enumerate(patch.faces):
        if face.arity == 6:
            where.update({(f, i): (len(faces), i) for i in range(6)})
            faces.append((f, face.type, face.verts))
        elif face.type == split and face.arity == 10:
            a, b = len(faces), len(faces) + 1
            v = face.verts
            faces.append((f, face.type, v[0:6]))
            faces.append((f, face.type, v[5:10] + (v[0],)))
            where.update({(f, i): (a, i) for i in range(5)})
            where.update({(f, 5 + i): (b, i) for i in range(5)})
            twins[(a, 5)] = (b, 5)
            twins[(b, 5)] = (a, 5)
        else:
            raise RealizationError(f"face {f} of type {face.type} has no hexagonal shape")
    for he, other in patch.twins.items():
        twins[where[he]] = where[other]
    return HexComplex(faces, twins)


@dataclass
class HexEmbedding:
    cells: dict[int, tuple[tuple[int, int], int]]  # hex face -> (cell, rotation)
    vertex_keys: dict[int, tuple[int, int]]
    complex: HexComplex
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def _corner_key(cell, m):
    d0, d1 = DIRS[m % 6], DIRS[(m + 1) % 6]
    return (3 * cell[0] + d0[0] + d1[0], 3 * cell[1] + d0[1] + d1[1])


def realize_hex(patch: Patch) -> HexEmbedding:
    """Place each hexagon on the axial grid by walking across glued edges."""
    cx = hex_subdivide(patch)
    cells: dict[int, tuple[tuple[int, int], int]] = {0: ((0, 0), 0)}
    problems = []
    queue = deque([0])
    while queue:
        a = queue.popleft()
        cell, rot = cells[a]
        for j in range(6):
            other = cx.twins.get((a, j))
            if other is None:
                continue
            b, jb = other
            m = (rot + j) % 6
            d = DIRS[(m + 1) % 6]
            place = ((cell[0] + d[0], cell[1] + d[1]), (m + 3 - jb) % 6)
            if b in cells:
                if cells[b] != place:
                    problems.append(f"hexagon {b} reached at two placements")
            else:
                cells[b] = place
                queue.append(b)
    if len(cells) != len(cx.faces):
        problems.append("complex is not connected")
    owner = {}
    for a, (cell, _) in cells.items():
        if cell in owner:
            problems.append(f"hexagons {owner[cell]} and {a} overlap at {cell}")
        owner[cell] = a
    keys: dict[int, tuple[int, int]] = {}
    for a, (cell, rot) in cells.items():
        for j, v in enumerate(cx.faces[a][2]):
            k = _corner_key(cell, rot + j)
            if keys.setdefault(v, k) != k:
                problems.append(f"vertex {v} lands on two grid points")
    if len(set(keys.values())) != len(keys):
        problems.append("two vertices share a grid point")
    # neighbouring cells must be glued along their common side
    for a, (cell, rot) in cells.items():
        for j in range(6):
            m = (rot + j) % 6
            d = DIRS[(m + 1) % 6]
            nb = owner.get((cell[0] + d[0], cell[1] + d[1]))
            if nb is not None and cx.twins.get((a, j), (None,))[0] != nb:
                problems.append(f"hexagons {a} and {nb} touch without being glued")
    return HexEmbedding(cells, keys, cx, problems)


def hex_valences(emb: HexEmbedding, patch: Patch) -> dict[int, int]:
    """Number of hexagons around each interior vertex of the patch."""
    count: dict[int, int] = defaultdict(int)
    for _, _, verts in emb.complex.faces:
        for v in verts:
            count[v] += 1
    return {v: count[v] for v in patch.interior_vertices()}


def hex_center(cell) -> tuple[float, float]:
    q, r = cell
    return (q + r / 2, r * np.sqrt(3) / 2)


def hex_polygon(cell) -> list[tuple[float, float]]:
    cx, cy = hex_center(cell)
    out = []
    for m in range(6):
        ang = np.pi / 6 + m * np.pi / 3
        out.append((cx + np.cos(ang) / np.sqrt(3), cy + np.sin(ang) / np.sqrt(3)))
    return out


# -- stepped surface tiling ---------------------------------------------------------


def facet_polygon(facet: Facet, pisot: PisotData | None = None, lin=None) -> np.ndarray:
    pts = (pisot or tribonacci_pisot()).project(facet_corners(facet))
    return pts @ lin.T if lin is not None else pts


@dataclass
class StepReport:
    ok: bool
    overlap: float
    valences: set[int]
    covered: float
    problems: list[str]


def check_step_tiling(radius: int = 2, disc: float = 1.0, pisot: PisotData | None = None) -> StepReport:
    pisot = pisot or tribonacci_pisot()
    facets = stepped_window(pisot, radius)
    polys = [Polygon(facet_polygon(f, pisot)) for f in facets]
    problems = []
    tree = STRtree(polys)
    overlap = 0.0
    for a, p in enumerate(polys):
        for b in tree.query(p):
            if b > a:
                overlap += p.intersection(polys[b]).area
    if overlap > 1e-9:
        problems.append(f"facet interiors overlap, total area {overlap:.3g}")
    # vertex valences: interior when the corner angles close up to a full turn
    angles: dict[tuple, float] = defaultdict(float)
    degree: dict[tuple, int] = defaultdict(int)
    for f in facets:
        corners = facet_corners(f)
        pts = pisot.project(corners)
        for k in range(4):
            u, v = pts[k - 1] - pts[k], pts[(k + 1) % 4] - pts[k]
            ang = np.arccos(np.clip(u @ v / np.linalg.norm(u) / np.linalg.norm(v), -1, 1))
            key = tuple(int(c) for c in corners[k])
            angles[key] += float(ang)
            degree[key] += 1
    valences = {degree[k] for k, a in angles.items() if abs(a - 2 * np.pi) < 1e-9}
    if not valences <= {3, 4, 5, 6}:
        problems.append(f"vertex valences {sorted(valences)}")
    circle = Point(0, 0).buffer(disc, 64)
    union = unary_union(polys)
    covered = union.intersection(circle).area
    if abs(covered - circle.area) > 1e-6:
        problems.append(f"central disc only covered up to area {covered:.6f} of {circle.area:.6f}")
    return StepReport(not problems, overlap, valences, covered, problems)


# -- SVG ---------------------------------------------------------------------


def _fmt(v: float) -> str:
    s = f"{v:.5f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _path(rings) -> str:
    out = []
    for ring in rings:
        pts = [f"{_fmt(x)},{_fmt(-y)}" for x, y in ring]
        out.append("M" + " L".join(pts) + " Z")
    return " ".join(out)


def _rings(geom):
    polys = list(geom.geoms) if geom.geom_type == "MultiPolygon" else [geom]
    for p in polys:
        yield list(p.exterior.coords)[:-1]


def svg_document(items, pad: float = 0.2, stroke: float = 0.01, colors=None) -> str:
    """items: (kind, color key, payload); kind 'path' takes rings, 'dot' a point."""
    colors = colors or COLORS
    xs, ys = [0.0], [0.0]
    for kind, _, payload in items:
        pts = [payload] if kind == "dot" else [p for ring in payload for p in ring]
        xs += [p[0] for p in pts]
        ys += [-p[1] for p in pts]
    # keep the view centered at the origin
    rx = round(max(abs(min(xs)), abs(max(xs))) + pad, 4)
    ry = round(max(abs(min(ys)), abs(max(ys))) + pad, 4)
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
             f'viewBox="{_fmt(-rx)} {_fmt(-ry)} {_fmt(2 * rx)} {_fmt(2 * ry)}">']
    for kind, key, payload in items:
        if kind == "dot":
            lines.append(f'<circle cx="{_fmt(payload[0])}" cy="{_fmt(-payload[1])}" '
                         f'r="{_fmt(stroke)}" fill="{colors[key]}"/>')
        else:
            lines.append(f'<path d="{_path(payload)}" fill="{colors[key]}" '
                         f'stroke="black" stroke-width="{_fmt(stroke)}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_step(radius: int = 2, pisot=None, **kw) -> str:
    pisot = pisot or tribonacci_pisot()
    items = [("path", f[1], [facet_polygon(f, pisot).tolist()]) for f in stepped_window(pisot, radius)]
    return svg_document(items, **kw)


def top_tiles(n: int, pisot=None):
    """(type code, shapely geometry) per tile of sigma^n(C): h^3 applied to its projected multiset."""
    from .linkage import THETA, phi0
    from .position import solve_position_table
    from .subfile import builtin
    from .topo import Tower

    pisot = pisot or tribonacci_pisot()
    tower = Tower(builtin("tribonacci"), "C")
    table = solve_position_table(tower)
    patch = tower.level(n)
    adj = patch.adjacency()
    h3 = np.linalg.matrix_power(pisot.h, 3)
    out = []
    for f, face in enumerate(patch.faces):
        mset = phi0(table, patch, {f}, tower.base(n), adj)
        polys = [Polygon(facet_polygon(g, pisot, h3)) for g in sorted(mset)]
        out.append((THETA[face.type], unary_union(polys)))
    return out


def render_top(n: int = 4, pisot=None, **kw) -> str:
    items = [("path", code, list(_rings(geom))) for code, geom in top_tiles(n, pisot)]
    return svg_document(items, **kw)


def render_frac(n: int = 10_000, pisot=None, **kw) -> str:
    cloud = rauzy_cloud(n, pisot)
    kw.setdefault("stroke", 0.004)
    items = [("dot", int(lab), (float(x), float(y))) for (x, y), lab in zip(cloud.points, cloud.labels)]
    return svg_document(items, **kw)


def render(mode: str, **kw) -> str:
    if mode == "step":
        return render_step(**kw)
    if mode == "top":
        return render_top(**kw)
    if mode == "frac":
        return render_frac(**kw)
    raise ValueError(f"unknown render mode {mode!r}")
