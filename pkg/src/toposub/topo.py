"""Topological pre-substitutions acting on CW patches."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from .cwpatch import Face, Patch, PatchError, _UnionFind, core, validate_patch

# an oriented prototile edge (type, from-vertex, to-vertex)
Edge = tuple[str, int, int]
Pair = tuple[Edge, Edge]
# an edge of an image face: (face index in the image, from, to)
LocalEdge = tuple[int, int, int]


class CompatibilityError(ValueError):
    def __init__(self, pair: Pair, lengths: tuple[int, int], level: int = 0):
        self.pair = pair
        self.lengths = lengths
        self.level = level
        super().__init__(f"unbalanced pair {pair_str(pair)} with image lengths {lengths}")


class InvalidSubstitution(ValueError):
    pass


class CannotInflate(ValueError):
    pass


def edge_str(e: Edge) -> str:
    t, a, b = e
    return f"{t}{a}{b}" if a < 10 and b < 10 else f"{t}{a}-{b}"


def pair_str(p: Pair) -> str:
    return f"[{edge_str(p[0])},{edge_str(p[1])}]"


def parse_pair(text: str) -> Pair:
    """Parse "[A23,B05]" (single-digit vertex labels)."""
    a, b = text.strip().strip("[]").split(",")
    return ((a[0], int(a[1]), int(a[2])), (b[0], int(b[1]), int(b[2])))


def inv(e: Edge) -> Edge:
    return (e[0], e[2], e[1])


def normalize_pair(p: Pair) -> Pair:
    """Representative of the class of p under flip and reversion."""
    e, f = p
    return min((e, f), (f, e), (inv(e), inv(f)), (inv(f), inv(e)))


def pair_orientation(p: Pair) -> int:
    """+1 if the normal form keeps the first edge on the left side, -1 if flipped,
    0 if the class is invariant under flip."""
    e, f = p
    n = normalize_pair(p)
    same = n in ((e, f), (inv(e), inv(f)))
    swapped = n in ((f, e), (inv(f), inv(e)))
    if same and swapped:
        return 0
    return 1 if same else -1


@dataclass
class PreSubstitution:
    """Prototiles, image patches and boundary correspondences."""

    arities: dict[str, int]
    images: dict[str, list[str]]
    gluings: dict[str, list[tuple[LocalEdge, LocalEdge]]]
    vertex_images: dict[str, list[tuple[int, int]]]
    edge_images: dict[str, list[list[LocalEdge]]]
    base: dict[str, int] = field(default_factory=dict)
    name: str = ""

    @property
    def types(self) -> list[str]:
        return list(self.arities)

    def base_index(self, t: str) -> int:
        if t in self.base:
            return self.base[t]
        img = self.images[t]
        return img.index(t) if t in img else 0

    @cached_property
    def image_patches(self) -> dict[str, Patch]:
        out = {}
        for t in self.types:
            types = self.images[t]
            glue = []
            for e1, e2 in self.gluings.get(t, []):
                h1, fwd1 = self._half_edge(types, e1)
                h2, fwd2 = self._half_edge(types, e2)
                if fwd1 == fwd2:
                    raise InvalidSubstitution(f"gluing {e1} {e2} in image of {t} reverses orientation")
                glue.append((h1[0], h1[1], h2[0], h2[1]))
            out[t] = Patch.glue(self.arities, types, glue)
        return out

    def _half_edge(self, types: list[str], e: LocalEdge) -> tuple[tuple[int, int], bool]:
        f, x, y = e
        k = self.arities[types[f]]
        if y == (x + 1) % k:
            return (f, x), True
        if x == (y + 1) % k:
            return (f, y), False
        raise InvalidSubstitution(f"{e} is not an edge of a {k}-gon")

    def image_path(self, t: str, i: int) -> list[tuple[int, int]]:
        """Half-edges of the image patch of t forming the image of edge i -> i+1."""
        return [self._half_edge(self.images[t], e)[0] for e in self.edge_images[t][i]]

    def image_edges(self, e: Edge) -> list[Edge]:
        """The image of an oriented prototile edge as a list of oriented prototile edges."""
        t, a, b = e
        k = self.arities[t]
        types = self.images[t]
        if b == (a + 1) % k:
            return [(types[f], x, y) for f, x, y in self.edge_images[t][a]]
        if a == (b + 1) % k:
            return [(types[f], y, x) for f, x, y in reversed(self.edge_images[t][b])]
        raise InvalidSubstitution(f"{e} is not an edge")

    def validate(self) -> list[str]:
        problems = []
        for t in self.types:
            try:
                patch = self.image_patches[t]
            except (InvalidSubstitution, PatchError) as exc:
                problems.append(f"image of {t}: {exc}")
                continue
            rep = validate_patch(patch)
            problems += [f"image of {t}: {p}" for p in rep.problems]
            if not rep.valid:
                continue
            k = self.arities[t]
            if len(self.vertex_images[t]) != k or len(self.edge_images[t]) != k:
                problems.append(f"image of {t}: wrong number of vertex or edge images")
                continue
            bnd = set(patch.boundary_half_edges())
            used = []
            for i in range(k):
                try:
                    path = self.image_path(t, i)
                except InvalidSubstitution as exc:
                    problems.append(f"image of {t}{i}{(i + 1) % k}: {exc}")
                    continue
                if not path:
                    problems.append(f"image of edge {t}{i}{(i + 1) % k} is empty")
                    continue
                start = self._vertex(t, i)
                end = self._vertex(t, (i + 1) % k)
                cur = start
                for he in path:
                    if he not in bnd:
                        problems.append(f"image of {t}{i}{(i + 1) % k} uses non-boundary edge {he}")
                    a, b = patch.endpoints(he)
                    if a != cur:
                        problems.append(f"image of {t}{i}{(i + 1) % k} is not a path")
                    cur = b
                if cur != end:
                    problems.append(f"image of {t}{i}{(i + 1) % k} does not end at the image vertex")
                used += path
            if sorted(used) != sorted(bnd) or len(used) != len(bnd):
                problems.append(f"edge images of {t} do not cover the boundary exactly once")
        return problems

    def _vertex(self, t: str, v: int) -> int:
        f, c = self.vertex_images[t][v]
        return self.image_patches[t].faces[f].verts[c]


# -- balanced pairs ------------------------------------------------------------


def descendants(presub: PreSubstitution, pair: Pair) -> list[Pair]:
    e, f = pair
    ie, jf = presub.image_edges(e), presub.image_edges(f)
    if len(ie) != len(jf):
        raise CompatibilityError(normalize_pair(pair), (len(ie), len(jf)))
    return [normalize_pair(p) for p in zip(ie, jf)]


def interior_pairs(patch: Patch) -> dict[tuple[int, int], Pair]:
    """Oriented pair for each interior half-edge (f, i): f's edge first, both
    read in the direction of (f, i)."""
    out = {}
    for (f, i), (g, j) in patch.twins.items():
        kf, kg = patch.faces[f].arity, patch.faces[g].arity
        out[(f, i)] = ((patch.faces[f].type, i, (i + 1) % kf),
                       (patch.faces[g].type, (j + 1) % kg, j))
    return out


def interior_classes(patch: Patch) -> set[Pair]:
    return {normalize_pair(p) for p in interior_pairs(patch).values()}


@dataclass
class EdgeGraph:
    nodes: set[Pair]
    arcs: dict[Pair, list[Pair]]
    p0: int


@dataclass
class CompatibilityResult:
    compatible: bool
    graph: EdgeGraph | None = None
    witness: Pair | None = None
    lengths: tuple[int, int] | None = None
    level: int | None = None


def check_compatibility(presub: PreSubstitution, max_levels: int = 1000) -> CompatibilityResult:
    """Grow the sets W_p of balanced pairs met at level p until nothing new appears."""
    images = presub.image_patches
    local = {t: interior_classes(images[t]) for t in presub.types}
    types = set(presub.types)
    w: set[Pair] = set()
    v: set[Pair] = set()
    arcs: dict[Pair, list[Pair]] = {}
    seen_states = set()
    p = 0
    while p < max_levels:
        p += 1
        nxt = set().union(*(local[t] for t in types))
        for pair in sorted(w):
            if pair not in arcs:
                try:
                    arcs[pair] = descendants(presub, pair)
                except CompatibilityError as exc:
                    return CompatibilityResult(False, witness=exc.pair, lengths=exc.lengths, level=p - 1)
            nxt.update(arcs[pair])
        for pair in sorted(nxt):
            e, f = pair
            le, lf = len(presub.image_edges(e)), len(presub.image_edges(f))
            if le != lf:
                return CompatibilityResult(False, witness=pair, lengths=(le, lf), level=p)
        types = {s for t in types for s in presub.images[t]}
        state = (frozenset(nxt), frozenset(types))
        w = nxt
        grew = not nxt <= v
        v |= nxt
        if state in seen_states and not grew:
            break
        seen_states.add(state)
    for pair in sorted(v):
        if pair not in arcs:
            arcs[pair] = descendants(presub, pair)
    return CompatibilityResult(True, graph=EdgeGraph(v, arcs, p))


# -- iteration ---------------------------------------------------------------


@dataclass
class Substituted:
    patch: Patch
    parent: list[int]
    vertex_map: dict[int, int]


def substitute(presub: PreSubstitution, patch: Patch) -> Substituted:
    """Replace every face by its image and glue images across interior edges."""
    uf = _UnionFind()
    images = presub.image_patches
    types, addrs, parent, verts = [], [], [], []
    twins: dict[tuple[int, int], tuple[int, int]] = {}
    first: list[int] = []
    voff = 0
    for f, face in enumerate(patch.faces):
        img = images[face.type]
        base = len(types)
        first.append(base)
        for k, iface in enumerate(img.faces):
            types.append(iface.type)
            addrs.append(face.addr + (k,))
            parent.append(f)
            verts.append([voff + x for x in iface.verts])
        for (g, i), (h, j) in img.twins.items():
            twins[(base + g, i)] = (base + h, j)
        voff += len(img.vertices())
    for (f, i), (g, j) in patch.twins.items():
        if (f, i) > (g, j):
            continue
        ff, gg = patch.faces[f], patch.faces[g]
        p1 = [(first[f] + a, b) for a, b in presub.image_path(ff.type, i)]
        p2 = [(first[g] + a, b) for a, b in presub.image_path(gg.type, j)]
        if len(p1) != len(p2):
            pair = ((ff.type, i, (i + 1) % ff.arity), (gg.type, (j + 1) % gg.arity, j))
            raise CompatibilityError(normalize_pair(pair), (len(p1), len(p2)))
        for h1, h2 in zip(p1, reversed(p2)):
            twins[h1] = h2
            twins[h2] = h1
            (a1, b1), (a2, b2) = h1, h2
            k1, k2 = len(verts[a1]), len(verts[a2])
            uf.union(verts[a1][b1], verts[a2][(b2 + 1) % k2])
            uf.union(verts[a1][(b1 + 1) % k1], verts[a2][b2])
    ids: dict[int, int] = {}
    faces = []
    for t, a, vs in zip(types, addrs, verts):
        new = []
        for x in vs:
            r = uf.find(x)
            new.append(ids.setdefault(r, len(ids)))
        faces.append(Face(t, tuple(new), a))
    vmap = {}
    for f, face in enumerate(patch.faces):
        for c, v in enumerate(face.verts):
            if v not in vmap:
                k, cc = presub.vertex_images[face.type][c]
                vmap[v] = faces[first[f] + k].verts[cc]
    return Substituted(Patch(faces, twins), parent, vmap)


def iterate(presub: PreSubstitution, prototile: str, p: int) -> Patch:
    return Tower(presub, prototile).level(p)


class Tower:
    """The patches sigma^n(T) for n = 0, 1, ... with parent and vertex maps."""

    def __init__(self, presub: PreSubstitution, generator: str):
        self.presub = presub
        self.generator = generator
        self.levels = [Patch.single(generator, presub.arities[generator])]
        self.parents: list[list[int]] = [[]]
        self.vmaps: list[dict[int, int]] = []
        self._index: list[dict[tuple[int, ...], int]] = [{(): 0}]

    def level(self, n: int) -> Patch:
        while len(self.levels) <= n:
            sub = substitute(self.presub, self.levels[-1])
            self.levels.append(sub.patch)
            self.parents.append(sub.parent)
            self.vmaps.append(sub.vertex_map)
            self._index.append({f.addr: k for k, f in enumerate(sub.patch.faces)})
        return self.levels[n]

    def face_at(self, n: int, addr: tuple[int, ...]) -> int:
        self.level(n)
        return self._index[n][addr]

    def base_addr(self, n: int) -> tuple[int, ...]:
        addr: tuple[int, ...] = ()
        t = self.generator
        for _ in range(n):
            k = self.presub.base_index(t)
            addr += (k,)
            t = self.presub.images[t][k]
        return addr

    def base(self, n: int) -> int:
        return self.face_at(n, self.base_addr(n))

    def children(self, n: int, f: int) -> list[int]:
        addr = self.level(n).faces[f].addr
        size = len(self.presub.images[self.levels[n].faces[f].type])
        return [self.face_at(n + 1, addr + (k,)) for k in range(size)]

    def b(self, n: int, f: int) -> int:
        face = self.level(n).faces[f]
        return self.face_at(n + 1, face.addr + (self.presub.base_index(face.type),))

    def vertex_image(self, n: int, v: int) -> int:
        self.level(n + 1)
        return self.vmaps[n][v]


def pointed_substitute(tower: Tower, n: int, faces: set[int], base: int) -> tuple[set[int], int]:
    out: set[int] = set()
    for f in faces:
        out.update(tower.children(n, f))
    return out, tower.b(n, base)


# -- vertex graphs -----------------------------------------------------------


def vertex_name(t: str, c: int) -> str:
    return f"{t}{c}"


@dataclass
class VertexGraph:
    arcs: dict[str, list[str]]
    divided: set[str]
    bounded_valence: bool


def vertex_heredity_graph(presub: PreSubstitution) -> VertexGraph:
    arcs: dict[str, list[str]] = {}
    for t in presub.types:
        img = presub.image_patches[t]
        corners = img.corners()
        for v in range(presub.arities[t]):
            iv = presub._vertex(t, v)
            arcs[vertex_name(t, v)] = sorted({vertex_name(img.faces[g].type, c) for g, c in corners[iv]})
    divided = {v for v, out in arcs.items() if len(out) >= 2}
    g = nx.DiGraph()
    g.add_nodes_from(arcs)
    g.add_edges_from((a, b) for a, out in arcs.items() for b in out)
    on_cycle = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1:
            on_cycle |= comp
    on_cycle |= {a for a in g if g.has_edge(a, a)}
    return VertexGraph(arcs, divided, not (divided & on_cycle))


Config = tuple[str, ...]


def config_str(cfg: Config) -> str:
    return "[" + ",".join(cfg) + "]"


def parse_config(text: str) -> Config:
    from .cwpatch import canonical_cycle
    return canonical_cycle(tuple(x.strip() for x in text.strip().strip("[]").split(",")))


@dataclass
class ConfigGraph:
    nodes: set[Config]
    arcs: dict[Config, set[Config]]
    seeds: set[Config]


def configuration_graph(presub: PreSubstitution, depth: int = 6,
                        generators: list[str] | None = None) -> ConfigGraph:
    nodes: set[Config] = set()
    arcs: dict[Config, set[Config]] = defaultdict(set)
    seeds: set[Config] = set()
    for t in presub.types:
        img = presub.image_patches[t]
        seeds |= {img.configuration(v) for v in img.interior_vertices()}
    for t in generators or presub.types:
        tower = Tower(presub, t)
        for n in range(1, depth + 1):
            patch = tower.level(n)
            nxt = tower.level(n + 1)
            for v in patch.interior_vertices():
                cfg = patch.configuration(v)
                img = nxt.configuration(tower.vertex_image(n, v))
                nodes.add(cfg)
                nodes.add(img)
                arcs[cfg].add(img)
    return ConfigGraph(nodes, dict(arcs), seeds)


def core_property(presub: PreSubstitution, max_k: int = 12) -> tuple[str, int] | None:
    towers = {t: Tower(presub, t) for t in presub.types}
    for k in range(1, max_k + 1):
        for t in presub.types:
            if core(towers[t].level(k)):
                return t, k
    return None


@dataclass
class InflatedComplex:
    """Nested windows sigma^{jk}(T); level j sits inside level j+1 as the
    descendants of the base tile b^k(T)."""

    tower: Tower
    k: int
    levels: int

    def patch(self, j: int) -> Patch:
        return self.tower.level(j * self.k)

    def identify(self, j: int, f: int) -> int:
        addr = self.patch(j).faces[f].addr
        return self.tower.face_at((j + 1) * self.k, self.tower.base_addr(self.k) + addr)

    def base(self, j: int) -> int:
        return self.tower.base(j * self.k)


def nesting_exponent(presub: PreSubstitution, prototile: str, budget: int = 8) -> int:
    tower = Tower(presub, prototile)
    for k in range(1, budget + 1):
        b = tower.base(k)
        patch = tower.level(k)
        if patch.faces[b].type == prototile and b in core(patch):
            return k
    raise CannotInflate(f"no power <= {budget} puts the base {prototile} tile in the core")


def inflate(presub: PreSubstitution, prototile: str, levels: int, budget: int = 8) -> InflatedComplex:
    k = nesting_exponent(presub, prototile, budget)
    tower = Tower(presub, prototile)
    tower.level(levels * k)
    return InflatedComplex(tower, k, levels)


# -- DOT export ----------------------------------------------------------------


def _dot(name: str, arcs: dict[str, list[str]]) -> str:
    lines = [f"digraph {name} {{"]
    for a in sorted(arcs):
        lines.append(f'  "{a}";')
    for a in sorted(arcs):
        for b in sorted(arcs[a]):
            lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def edge_graph_dot(graph: EdgeGraph) -> str:
    return _dot("edges", {pair_str(a): [pair_str(b) for b in graph.arcs.get(a, [])]
                          for a in graph.nodes})


def vertex_graph_dot(graph: VertexGraph) -> str:
    return _dot("vertices", graph.arcs)


def config_graph_dot(graph: ConfigGraph) -> str:
    return _dot("configurations", {config_str(a): [config_str(b) for b in graph.arcs.get(a, set())]
                                   for a in graph.nodes})
