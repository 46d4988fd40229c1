"""Finite disc-shaped CW patches built from labelled polygons.

A face is a polygon with corners 0..k-1 in counter-clockwise order. Half-edge
(f, i) runs from corner i to corner i+1 of face f. Two glued half-edges are
twins and run in opposite directions. Vertices are integer ids shared by the
corners they identify.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

HalfEdge = tuple[int, int]


class PatchError(ValueError):
    pass


class HostTooSmall(PatchError):
    pass


@dataclass(frozen=True)
class Face:
    type: str
    verts: tuple[int, ...]
    addr: tuple[int, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.verts)


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass
class Patch:
    faces: list[Face]
    twins: dict[HalfEdge, HalfEdge] = field(default_factory=dict)

    # -- construction -----------------------------------------------------

    @classmethod
    def glue(cls, arities: dict[str, int], types: list[str],
             gluings: list[tuple[int, int, int, int]],
             addrs: list[tuple[int, ...]] | None = None) -> "Patch":
        """Build a patch from typed faces and gluings (f, i, g, j) of half-edge
        (f, i) against half-edge (g, j)."""
        uf = _UnionFind()
        offsets = []
        n = 0
        for t in types:
            offsets.append(n)
            n += arities[t]
        twins: dict[HalfEdge, HalfEdge] = {}
        for f, i, g, j in gluings:
            kf, kg = arities[types[f]], arities[types[g]]
            for he in ((f, i), (g, j)):
                if he in twins:
                    raise PatchError(f"half-edge {he} glued twice")
            if (f, i) == (g, j):
                raise PatchError(f"half-edge {(f, i)} glued to itself")
            twins[(f, i)] = (g, j)
            twins[(g, j)] = (f, i)
            uf.union(offsets[f] + i, offsets[g] + (j + 1) % kg)
            uf.union(offsets[f] + (i + 1) % kf, offsets[g] + j)
        faces = [Face(t, tuple(uf.find(offsets[f] + c) for c in range(arities[t])),
                      addrs[f] if addrs else ())
                 for f, t in enumerate(types)]
        return cls(faces, twins).compact()

    @classmethod
    def single(cls, type_: str, arity: int) -> "Patch":
        return cls([Face(type_, tuple(range(arity)))], {})

    def compact(self) -> "Patch":
        """Renumber vertices 0..V-1 in order of first appearance."""
        ids: dict[int, int] = {}
        for face in self.faces:
            for v in face.verts:
                ids.setdefault(v, len(ids))
        faces = [Face(f.type, tuple(ids[v] for v in f.verts), f.addr) for f in self.faces]
        return Patch(faces, dict(self.twins))

    # -- basic counts -----------------------------------------------------

    def __len__(self) -> int:
        return len(self.faces)

    def vertices(self) -> set[int]:
        return {v for f in self.faces for v in f.verts}

    def half_edges(self):
        for f, face in enumerate(self.faces):
            for i in range(face.arity):
                yield (f, i)

    def endpoints(self, he: HalfEdge) -> tuple[int, int]:
        f, i = he
        verts = self.faces[f].verts
        return verts[i], verts[(i + 1) % len(verts)]

    def n_edges(self) -> int:
        total = sum(f.arity for f in self.faces)
        return total - len(self.twins) // 2

    def euler(self) -> int:
        return len(self.vertices()) - self.n_edges() + len(self.faces)

    def type_counts(self) -> dict[str, int]:
        out: dict[str, int] = defaultdict(int)
        for f in self.faces:
            out[f.type] += 1
        return dict(sorted(out.items()))

    # -- boundary ---------------------------------------------------------

    def boundary_half_edges(self) -> list[HalfEdge]:
        return [he for he in self.half_edges() if he not in self.twins]

    def boundary_cycles(self) -> list[list[HalfEdge]]:
        out_of: dict[int, list[HalfEdge]] = defaultdict(list)
        for he in self.boundary_half_edges():
            out_of[self.endpoints(he)[0]].append(he)
        if any(len(v) > 1 for v in out_of.values()):
            bad = next(v for v, hs in out_of.items() if len(hs) > 1)
            raise PatchError(f"boundary pinched at vertex {bad}")
        seen: set[HalfEdge] = set()
        cycles = []
        for start in sorted(he for hs in out_of.values() for he in hs):
            if start in seen:
                continue
            cyc = []
            he = start
            while he not in seen:
                seen.add(he)
                cyc.append(he)
                nxt = out_of.get(self.endpoints(he)[1])
                if not nxt:
                    raise PatchError(f"boundary broken after half-edge {he}")
                he = nxt[0]
            cycles.append(cyc)
        return cycles

    def boundary_cycle(self) -> list[HalfEdge]:
        cycles = self.boundary_cycles()
        if len(cycles) != 1:
            raise PatchError(f"{len(cycles)} boundary cycles")
        return cycles[0]

    def boundary_vertices(self) -> set[int]:
        return {self.endpoints(he)[0] for he in self.boundary_half_edges()}

    # -- local structure --------------------------------------------------

    def corners(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for f, face in enumerate(self.faces):
            for c, v in enumerate(face.verts):
                out[v].append((f, c))
        return out

    def star(self, v: int, corners=None) -> tuple[list[tuple[int, int]], bool]:
        """Corners around v in counter-clockwise order and whether v is interior."""
        corners = corners or self.corners()
        around = corners[v]
        if not around:
            raise PatchError(f"no vertex {v}")
        f, c = around[0]
        # walk clockwise to the start of the fan when v is on the boundary
        for _ in range(len(around) + 1):
            k = self.faces[f].arity
            prev = self.twins.get((f, (c - 1) % k))
            if prev is None:
                break
            g, j = prev
            f, c = g, j
            if (f, c) == around[0]:
                break
        start = (f, c)
        fan = [start]
        interior = False
        while True:
            nxt = self.twins.get((f, c))
            if nxt is None:
                break
            g, j = nxt
            f, c = g, (j + 1) % self.faces[g].arity
            if (f, c) == start:
                interior = True
                break
            fan.append((f, c))
            if len(fan) > len(around):
                raise PatchError(f"corrupt star at vertex {v}")
        return fan, interior

    def interior_vertices(self) -> list[int]:
        bnd = self.boundary_vertices()
        return sorted(v for v in self.vertices() if v not in bnd)

    def valence(self, v: int) -> int:
        fan, interior = self.star(v)
        return len(fan) if interior else len(fan) + 1

    def configuration(self, v: int) -> tuple[str, ...]:
        fan, interior = self.star(v)
        if not interior:
            raise PatchError(f"vertex {v} is on the boundary")
        return canonical_cycle(tuple(f"{self.faces[f].type}{c}" for f, c in fan))

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {f: set() for f in range(len(self.faces))}
        for (f, _), (g, _) in self.twins.items():
            adj[f].add(g)
        return adj

    def shared_half_edges(self, f: int, g: int) -> list[HalfEdge]:
        return [(f, i) for i in range(self.faces[f].arity)
                if self.twins.get((f, i), (None,))[0] == g]

    def face_vertices_sets(self) -> list[set[int]]:
        return [set(face.verts) for face in self.faces]

    def shortest_path(self, src: int, dst: int, adj=None) -> list[int]:
        adj = adj or self.adjacency()
        prev = {src: None}
        queue = deque([src])
        while queue:
            f = queue.popleft()
            if f == dst:
                break
            for g in sorted(adj[f]):
                if g not in prev:
                    prev[g] = f
                    queue.append(g)
        if dst not in prev:
            raise PatchError(f"faces {src} and {dst} are not connected")
        path = [dst]
        while path[-1] != src:
            path.append(prev[path[-1]])
        return path[::-1]

    def subpatch_faces(self, keep: set[int]) -> "Patch":
        order = sorted(keep)
        index = {f: k for k, f in enumerate(order)}
        twins = {(index[f], i): (index[g], j) for (f, i), (g, j) in self.twins.items()
                 if f in index and g in index}
        return Patch([self.faces[f] for f in order], twins)

    def dump(self) -> str:
        lines = [f"faces {len(self.faces)}"]
        for f, face in enumerate(self.faces):
            lines.append(f"F {f} {face.type} " + " ".join(map(str, face.verts)))
        for (f, i), (g, j) in sorted(self.twins.items()):
            if (f, i) < (g, j):
                lines.append(f"H {f} {i} {g} {j}")
        return "\n".join(lines) + "\n"


def canonical_cycle(seq: tuple[str, ...]) -> tuple[str, ...]:
    """Smallest rotation of seq or of its reversal."""
    cands = []
    for s in (seq, tuple(reversed(seq))):
        for r in range(len(s)):
            cands.append(s[r:] + s[:r])
    return min(cands)


@dataclass
class PatchReport:
    valid: bool
    vertices: int
    edges: int
    faces: int
    euler: int
    boundary_length: int
    problems: list[str]


def validate_patch(patch: Patch) -> PatchReport:
    problems = []
    for (f, i), (g, j) in patch.twins.items():
        if patch.twins.get((g, j)) != (f, i):
            problems.append(f"twin of {(f, i)} is not symmetric")
        a, b = patch.endpoints((f, i))
        c, d = patch.endpoints((g, j))
        if (a, b) != (d, c):
            problems.append(f"half-edges {(f, i)} and {(g, j)} are not opposite")
    for f, face in enumerate(patch.faces):
        if len(set(face.verts)) != face.arity:
            problems.append(f"face {f} has a repeated vertex")
    seen: dict[frozenset, list[HalfEdge]] = defaultdict(list)
    for he in patch.half_edges():
        seen[frozenset(patch.endpoints(he))].append(he)
    for key, hes in seen.items():
        if len(hes) > 2:
            problems.append(f"edge {sorted(key)} lies on {len(hes)} faces")
        elif len(hes) == 2 and patch.twins.get(hes[0]) != hes[1]:
            problems.append(f"edge {sorted(key)} repeated without being glued")
    n_v, n_e, n_f = len(patch.vertices()), patch.n_edges(), len(patch.faces)
    euler = n_v - n_e + n_f
    if euler != 1:
        problems.append(f"Euler characteristic {euler} != 1")
    blen = 0
    try:
        blen = len(patch.boundary_cycle())
    except PatchError as exc:
        problems.append(str(exc))
    adj = patch.adjacency()
    if patch.faces:
        reach = {0}
        queue = deque([0])
        while queue:
            for g in adj[queue.popleft()]:
                if g not in reach:
                    reach.add(g)
                    queue.append(g)
        if len(reach) != n_f:
            problems.append("face adjacency graph is disconnected")
    if not problems:
        corners = patch.corners()
        for v in sorted(corners):
            try:
                fan, _ = patch.star(v, corners)
            except PatchError as exc:
                problems.append(str(exc))
                continue
            if len(fan) != len(corners[v]):
                problems.append(f"vertex {v} is not a manifold point")
    return PatchReport(not problems, n_v, n_e, n_f, euler, blen, problems)


# -- wreaths, cut tiles and the core ------------------------------------------


def wreath(patch: Patch, tile: int) -> set[int]:
    if not 0 <= tile < len(patch.faces):
        raise PatchError(f"tile {tile} not in patch")
    verts = set(patch.faces[tile].verts)
    return {g for g, face in enumerate(patch.faces)
            if g != tile and verts.intersection(face.verts)}


def _connected(nodes: set[int], linked) -> bool:
    if not nodes:
        return True
    start = next(iter(nodes))
    seen = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for g in nodes:
            if g not in seen and linked(f, g):
                seen.add(g)
                queue.append(g)
    return len(seen) == len(nodes)


def cut_tiles(patch: Patch) -> set[int]:
    vsets = patch.face_vertices_sets()
    out = set()
    for t in range(len(patch.faces)):
        w = wreath(patch, t)
        if not _connected(w, lambda f, g: bool(vsets[f] & vsets[g])):
            out.add(t)
    return out


def noncut_boundary_tile(patch: Patch) -> int:
    if len(patch.faces) == 1:
        return 0
    cuts = cut_tiles(patch)
    on_boundary = sorted({f for f, _ in patch.boundary_half_edges()})
    for f in on_boundary:
        if f not in cuts:
            return f
    raise PatchError("no non-cut boundary tile")


def thick_boundary_and_core(patch: Patch) -> tuple[set[int], set[int]]:
    bnd = patch.boundary_vertices()
    thick = {f for f, face in enumerate(patch.faces) if bnd.intersection(face.verts)}
    return thick, set(range(len(patch.faces))) - thick


def core(patch: Patch) -> set[int]:
    return thick_boundary_and_core(patch)[1]


def is_tile_path(patch: Patch, tiles: list[int], adj=None) -> bool:
    adj = adj or patch.adjacency()
    return len(tiles) >= 2 and all(b in adj[a] for a, b in zip(tiles, tiles[1:]))


def enclosing_disc(patch: Patch, loop: list[int]) -> tuple[set[int], int]:
    """Smallest subpatch containing the loop: its support plus bounded holes."""
    adj = patch.adjacency()
    if not is_tile_path(patch, loop, adj) or loop[0] != loop[-1]:
        raise PatchError("not a loop of tiles")
    support = set(loop)
    bnd = patch.boundary_vertices()
    if any(bnd.intersection(patch.faces[f].verts) for f in support):
        raise HostTooSmall("loop touches the host boundary")
    outside = {f for f in range(len(patch.faces))
               if f not in support and bnd.intersection(patch.faces[f].verts)}
    queue = deque(outside)
    while queue:
        f = queue.popleft()
        for g in adj[f]:
            if g not in support and g not in outside:
                outside.add(g)
                queue.append(g)
    disc = set(range(len(patch.faces))) - outside
    return disc, len(disc)
