"""The additive position map on tile paths.

Each balanced-pair class of glued edges carries a vector in Z^3, read from the
tile holding the first edge to the tile holding the second one. The table is
recovered by solving the linear constraints it must satisfy: agreement on
multi-edge adjacencies, zero sum around every interior vertex, and the
relation omega(b(T), b(T')) = M^-1 omega(T, T') under the pointed substitution.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np
import sympy

from .cwpatch import Patch, PatchError
from .symbolic import matrix_inverse
from .topo import Pair, Tower, normalize_pair, pair_orientation

Vec = tuple[int, int, int]


class TableInconsistent(ValueError):
    pass


class AmbiguousTable(ValueError):
    pass


class InvalidPath(ValueError):
    pass


# the A-B adjacency inside the image of C, read from A to B
TRIB_ANCHOR: tuple[Pair, Vec] = ((("A", 2, 3), ("B", 0, 5)), (0, -1, 1))

# (first tile type, second tile type, vector) for the fourteen tile pairs
TRIB_REFERENCE: list[tuple[str, str, Vec]] = [
    ("A", "B", (0, -1, 1)), ("A", "B", (0, 1, -2)),
    ("A", "C", (-1, 0, 1)), ("A", "C", (1, -1, -1)),
    ("B", "C", (-1, 1, 0)), ("B", "C", (1, -2, 1)),
    ("B", "B", (-1, 0, 2)),
    ("C", "C", (-1, 2, -1)), ("C", "C", (-1, 0, 2)), ("C", "C", (0, -2, 3)),
    ("B", "C", (1, 0, -2)), ("B", "C", (-1, -1, 3)), ("B", "C", (0, 1, -2)), ("B", "C", (0, -2, 3)),
]


def oriented_pair(patch: Patch, he: tuple[int, int]) -> Pair:
    f, i = he
    g, j = patch.twins[he]
    kf, kg = patch.faces[f].arity, patch.faces[g].arity
    return ((patch.faces[f].type, i, (i + 1) % kf), (patch.faces[g].type, (j + 1) % kg, j))


def typed_key(tl: str, tr: str, v) -> tuple[str, str, Vec]:
    """Orientation-free key: types in order, and for equal types the smaller of v, -v."""
    v = tuple(int(c) for c in v)
    if tl > tr:
        tl, tr, v = tr, tl, tuple(-c for c in v)
    if tl == tr:
        v = min(v, tuple(-c for c in v))
    return tl, tr, v


@dataclass
class PositionTable:
    values: dict[Pair, Vec]
    # classes seen on the same pair of tiles, with their relative orientation
    groups: list[list[tuple[Pair, int]]] = field(default_factory=list)

    def value(self, pair: Pair) -> np.ndarray:
        s = pair_orientation(pair)
        if s == 0:
            return np.zeros(3, dtype=np.int64)
        return s * np.array(self.values[normalize_pair(pair)], dtype=np.int64)

    def step(self, patch: Patch, f: int, g: int) -> np.ndarray:
        shared = patch.shared_half_edges(f, g)
        if not shared:
            raise InvalidPath(f"tiles {f} and {g} are not adjacent")
        return self.value(oriented_pair(patch, shared[0]))

    def perturbed(self, pair: Pair, delta: Vec) -> "PositionTable":
        vals = dict(self.values)
        key = normalize_pair(pair)
        vals[key] = tuple(a + b for a, b in zip(vals[key], delta))
        return PositionTable(vals, self.groups)

    def export(self) -> str:
        lines = []
        for (e, f), v in sorted(self.values.items()):
            lines.append(f"{e[0]} {e[1]}{e[2]} {f[0]} {f[1]}{f[2]} : {v[0]} {v[1]} {v[2]}")
        return "\n".join(lines) + "\n"


def omega_path(table: PositionTable, patch: Patch, tiles: list[int]) -> np.ndarray:
    if len(tiles) < 2:
        raise InvalidPath("a path has at least two tiles")
    total = np.zeros(3, dtype=np.int64)
    for f, g in zip(tiles, tiles[1:]):
        total += table.step(patch, f, g)
    return total


def omega(table: PositionTable, patch: Patch, t: int, t2: int, adj=None) -> np.ndarray:
    if t == t2:
        return np.zeros(3, dtype=np.int64)
    try:
        path = patch.shortest_path(t, t2, adj)
    except PatchError as exc:
        raise InvalidPath(str(exc)) from None
    return omega_path(table, patch, path)


# -- solving ---------------------------------------------------------------------


def _classes(patch: Patch) -> set[Pair]:
    return {normalize_pair(oriented_pair(patch, he)) for he in patch.twins}


def adjacency_groups(tower: Tower, depth: int) -> list[list[tuple[Pair, int]]]:
    """Classes that occur together on one pair of tiles, with relative orientation."""
    parent: dict[Pair, tuple[Pair, int]] = {}

    def find(c):
        s = 1
        while parent.setdefault(c, (c, 1))[0] != c:
            c, s2 = parent[c]
            s *= s2
        return c, s

    for n in range(1, depth + 1):
        patch = tower.level(n)
        for (f, i), (g, _) in patch.twins.items():
            if f > g:
                continue
            shared = patch.shared_half_edges(f, g)
            p0 = oriented_pair(patch, shared[0])
            r0, s0 = find(normalize_pair(p0))
            s0 *= pair_orientation(p0)
            for he in shared[1:]:
                p = oriented_pair(patch, he)
                r, s = find(normalize_pair(p))
                s *= pair_orientation(p)
                if r != r0:
                    parent[r] = (r0, s * s0)
    groups: dict[Pair, list[tuple[Pair, int]]] = defaultdict(list)
    for c in sorted(parent):
        r, s = find(c)
        groups[r].append((c, s))
    return [groups[r] for r in sorted(groups)]


def _path_terms(patch: Patch, path: list[int]) -> list[tuple[Pair, int]]:
    terms = []
    for f, g in zip(path, path[1:]):
        p = oriented_pair(patch, patch.shared_half_edges(f, g)[0])
        terms.append((normalize_pair(p), pair_orientation(p)))
    return terms


def constraint_rows(tower: Tower, depth: int, m_inv: np.ndarray):
    """Yield homogeneous equations as (list of (class, sign, 3x3 matrix))."""
    eye = np.eye(3, dtype=np.int64)
    for n in range(1, depth + 1):
        patch = tower.level(n)
        adj = patch.adjacency()
        # several edges between the same two tiles
        for f in range(len(patch.faces)):
            for g in adj[f]:
                shared = patch.shared_half_edges(f, g)
                p0 = oriented_pair(patch, shared[0])
                for he in shared[1:]:
                    p = oriented_pair(patch, he)
                    yield [(normalize_pair(p0), pair_orientation(p0), eye),
                           (normalize_pair(p), -pair_orientation(p), eye)]
        # zero sum around interior vertices
        corners = patch.corners()
        for v in patch.interior_vertices():
            fan, _ = patch.star(v, corners)
            terms = []
            for f, c in fan:
                p = oriented_pair(patch, (f, c))
                terms.append((normalize_pair(p), pair_orientation(p), eye))
            yield terms
        # image under the pointed substitution
        if n < depth:
            nxt = tower.level(n + 1)
            nadj = nxt.adjacency()
            for (f, i) in patch.twins:
                g = patch.twins[(f, i)][0]
                p = oriented_pair(patch, (f, i))
                path = nxt.shortest_path(tower.b(n, f), tower.b(n, g), nadj)
                terms = [(c, s, eye) for c, s in _path_terms(nxt, path)]
                terms.append((normalize_pair(p), -pair_orientation(p), m_inv))
                yield terms


def solve_position_table(tower: Tower, depth: int = 6, m=None,
                         anchor: tuple[Pair, Vec] | None = TRIB_ANCHOR,
                         reference: list[tuple[str, str, Vec]] | None = None) -> PositionTable:
    if m is None:
        m = np.array([[1, 1, 1], [1, 0, 0], [0, 1, 0]], dtype=np.int64)
    m_inv = matrix_inverse(m)
    classes = sorted(set().union(*(_classes(tower.level(n)) for n in range(1, depth + 1))))
    index = {c: k for k, c in enumerate(classes)}
    rows = set()
    for terms in constraint_rows(tower, depth, m_inv):
        mat = defaultdict(int)
        for c, s, block in terms:
            if s == 0:
                continue
            for r in range(3):
                for k in range(3):
                    if block[r, k]:
                        mat[(r, 3 * index[c] + k)] += s * int(block[r, k])
        for r in range(3):
            row = tuple(sorted((col, val) for (rr, col), val in mat.items() if rr == r and val))
            if row:
                rows.add(row)
    ncols = 3 * len(classes)
    a = sympy.zeros(len(rows), ncols)
    for r, row in enumerate(sorted(rows)):
        for col, val in row:
            a[r, col] = val
    null_dim = len(a.nullspace())
    b = sympy.zeros(len(rows), 1)
    if anchor is not None:
        pair, vec = anchor
        key = normalize_pair(pair)
        s = pair_orientation(pair)
        extra = sympy.zeros(3, ncols)
        for k in range(3):
            extra[k, 3 * index[key] + k] = s
        a = a.col_join(extra)
        b = b.col_join(sympy.Matrix(vec))
    try:
        sol, params = a.gauss_jordan_solve(b)
    except ValueError:
        raise TableInconsistent("position constraints have no solution") from None
    if params.shape[0] > 0:
        raise AmbiguousTable(f"{params.shape[0]} free parameters remain (solution space dimension {null_dim})")
    if any(not x.is_integer for x in sol):
        raise TableInconsistent("position table is not integral")
    values = {c: tuple(int(sol[3 * k + j]) for j in range(3)) for c, k in index.items()}
    groups = adjacency_groups(tower, depth)
    table = PositionTable(values, groups)
    table.null_dim = null_dim
    if reference is not None:
        got = Counter(group_values(table, groups))
        want = Counter(typed_key(*r) for r in reference)
        if got != want:
            raise TableInconsistent(f"value multiset differs from the reference: {sorted((got - want).elements())}")
    return table


def group_values(table: PositionTable, groups) -> list[tuple[str, str, Vec]]:
    out = []
    for g in groups:
        c, _ = g[0]
        out.append(typed_key(c[0][0], c[1][0], table.values[c]))
    return out


# -- verification ----------------------------------------------------------------


@dataclass
class LoopReport:
    ok: bool
    checked: int
    witness: list[int] | None = None
    value: Vec | None = None


def verify_loops(table: PositionTable, patch: Patch) -> LoopReport:
    checked = 0
    adj = patch.adjacency()
    for f in range(len(patch.faces)):
        for g in sorted(adj[f]):
            vals = [table.value(oriented_pair(patch, he)) for he in patch.shared_half_edges(f, g)]
            back = table.step(patch, g, f)
            for v in vals:
                checked += 1
                if (v + back).any() or (v - vals[0]).any():
                    return LoopReport(False, checked, [f, g, f], tuple(int(x) for x in v + back))
    corners = patch.corners()
    for v in patch.interior_vertices():
        fan, _ = patch.star(v, corners)
        total = np.zeros(3, dtype=np.int64)
        for f, c in fan:
            total += table.value(oriented_pair(patch, (f, c)))
        checked += 1
        if total.any():
            tiles = [f for f, _ in fan] + [fan[0][0]]
            return LoopReport(False, checked, tiles, tuple(int(x) for x in total))
    return LoopReport(True, checked)


@dataclass
class MatrixReport:
    ok: bool
    checked: int
    witness: tuple | None = None


def verify_matrix_relation(table: PositionTable, tower: Tower, depth: int, m=None) -> MatrixReport:
    if m is None:
        m = np.array([[1, 1, 1], [1, 0, 0], [0, 1, 0]], dtype=np.int64)
    m_inv = matrix_inverse(m)
    checked = 0
    for n in range(1, depth):
        patch, nxt = tower.level(n), tower.level(n + 1)
        nadj = nxt.adjacency()
        for (f, i), (g, _) in sorted(patch.twins.items()):
            x = table.value(oriented_pair(patch, (f, i)))
            got = omega(table, nxt, tower.b(n, f), tower.b(n, g), nadj)
            checked += 1
            if (got - m_inv @ x).any():
                return MatrixReport(False, checked, (oriented_pair(patch, (f, i)), tuple(x), tuple(got)))
    return MatrixReport(True, checked)


def vertex_shapes(table: PositionTable, patch: Patch) -> set[frozenset]:
    """Relative positions of the tiles around each interior vertex of valence >= 3,
    as sets of (type, vector) translated so that the smallest entry is at 0."""
    out = set()
    corners = patch.corners()
    for v in patch.interior_vertices():
        fan, _ = patch.star(v, corners)
        if len(fan) < 3:
            continue
        pos = [np.zeros(3, dtype=np.int64)]
        for f, c in fan[:-1]:
            pos.append(pos[-1] + table.value(oriented_pair(patch, (f, c))))
        items = [(patch.faces[f].type, tuple(int(x) for x in p)) for (f, _), p in zip(fan, pos)]
        out.add(normalize_shape(items))
    return out


def normalize_shape(items) -> frozenset:
    base = min(items)
    return frozenset((t, tuple(a - b for a, b in zip(p, base[1]))) for t, p in items)
