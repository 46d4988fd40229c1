"""From tiles of the topological tiling to facets of the stepped surface.

Each tile type gets a facet multiset Phi(type); a pointed patch (P, T) maps to
the sum of Phi(T') shifted by the position of T' relative to T. A single tile
then corresponds to the unique facet whose third dual image is its multiset.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .dual import TRIB_DUAL, DualRules, Facet, FacetMultiset, apply_dual, apply_power, membership, preimages
from .position import PositionTable, omega, oriented_pair
from .topo import Pair, Tower, normalize_pair, pair_orientation

THETA = {"A": 3, "B": 2, "C": 1}
SHIFT = {"A": (-1, 0, 1), "B": (-1, 1, 0), "C": (0, 0, 0)}
# number of dual steps from [0,1]* to Phi(type)
DEPTH = {"A": 1, "B": 2, "C": 3}

M3 = np.array([[4, 3, 2], [2, 2, 1], [1, 1, 1]], dtype=np.int64)


class OrientationError(RuntimeError):
    pass


def phi_type(t: str, rules: DualRules = TRIB_DUAL) -> FacetMultiset:
    return apply_power(rules, FacetMultiset.of([((0, 0, 0), 1)]), DEPTH[t])


_PHI = {t: phi_type(t) for t in THETA}


def phi0(table: PositionTable, patch, faces, base: int, adj=None) -> FacetMultiset:
    """Sum over T' in faces of Phi(T') + omega(base, T')."""
    adj = adj or patch.adjacency()
    out = FacetMultiset()
    for f in sorted(faces):
        shift = omega(table, patch, base, f, adj)
        out.update(_PHI[patch.faces[f].type].translate(shift))
    return out


@dataclass
class CommutationReport:
    ok: bool
    checked: int
    witness: tuple | None = None


def verify_commutation(table: PositionTable, tower: Tower, levels: int = 4,
                       single_tiles: bool = True) -> CommutationReport:
    """phi0(sigma(P), b(T)) == E(phi0(P, T)) for P = sigma^n(C) and for single
    tiles P, with T ranging over every tile of the window, n <= levels."""
    checked = 0
    for n in range(levels + 1):
        patch, nxt = tower.level(n), tower.level(n + 1)
        adj, nadj = patch.adjacency(), nxt.adjacency()
        everything = set(range(len(patch.faces)))
        subsets = [everything]
        if single_tiles:
            subsets += [{f} for f in sorted(everything)]
        for base in sorted(everything):
            for faces in subsets:
                img_faces = set()
                for f in faces:
                    img_faces.update(tower.children(n, f))
                lhs = phi0(table, nxt, img_faces, tower.b(n, base), nadj)
                rhs = apply_dual(TRIB_DUAL, phi0(table, patch, faces, base, adj))
                checked += 1
                if lhs != rhs:
                    diff = sorted((lhs - rhs) + (rhs - lhs))
                    return CommutationReport(False, checked, (n, sorted(faces), base, diff[:1]))
    return CommutationReport(True, checked)


def nested_copy(tower: Tower, m: int, n: int) -> set[int]:
    """The faces of level m descending from b^(m-n)(C): a copy of sigma^n(C)."""
    prefix = tower.base_addr(m - n)
    patch = tower.level(m)
    return {f for f, face in enumerate(patch.faces) if face.addr[:len(prefix)] == prefix}


def verify_commutation_nested(table: PositionTable, tower: Tower, levels: int = 4,
                              base_level: int = 2) -> CommutationReport:
    """phi0(sigma(P), b(T)) == E(phi0(P, T)) for P = sigma^n(C), n <= levels, and T
    any tile of sigma^base_level(C), both placed in one window along the b-chain."""
    m = max(levels, base_level)
    patch, nxt = tower.level(m), tower.level(m + 1)
    adj, nadj = patch.adjacency(), nxt.adjacency()
    bases = sorted(nested_copy(tower, m, base_level))
    checked = 0
    for n in range(levels + 1):
        faces = nested_copy(tower, m, n)
        img_faces = set()
        for f in faces:
            img_faces.update(tower.children(m, f))
        for base in bases:
            lhs = phi0(table, nxt, img_faces, tower.b(m, base), nadj)
            rhs = apply_dual(TRIB_DUAL, phi0(table, patch, faces, base, adj))
            checked += 1
            if lhs != rhs:
                diff = sorted((lhs - rhs) + (rhs - lhs))
                return CommutationReport(False, checked, (n, base, diff[:1]))
    return CommutationReport(True, checked)


# -- the bijection -----------------------------------------------------------------

# sign applied to omega(base, T) inside psi; +1 reads positions from the base tile
_CONVENTION: dict[str, int] = {}


def _psi_raw(table: PositionTable, tower: Tower, n: int, f: int, sign: int, adj=None) -> Facet:
    patch = tower.level(n)
    t = patch.faces[f].type
    w = sign * omega(table, patch, tower.base(n), f, adj)
    x = M3 @ (w + np.array(SHIFT[t], dtype=np.int64))
    return (int(x[0]), int(x[1]), int(x[2])), THETA[t]


def resolve_orientation(table: PositionTable, tower: Tower, level: int = 2) -> int:
    """Try both signs for the position term and keep the one landing in the stepped surface."""
    patch = tower.level(level)
    adj = patch.adjacency()
    good = []
    for sign in (1, -1):
        if all(membership(*_psi_raw(table, tower, level, f, sign, adj)) for f in range(len(patch.faces))):
            good.append(sign)
    if len(good) != 1:
        raise OrientationError(f"surviving orientation conventions: {good}")
    return good[0]


def convention(table: PositionTable, tower: Tower) -> int:
    key = id(table)
    if key not in _CONVENTION:
        _CONVENTION[key] = resolve_orientation(table, tower)
    return _CONVENTION[key]


def psi(table: PositionTable, tower: Tower, n: int, f: int, adj=None, check: bool = True) -> Facet:
    facet = _psi_raw(table, tower, n, f, convention(table, tower), adj)
    if check and not membership(*facet):
        raise OrientationError(f"tile {f} of level {n} maps outside the stepped surface")
    return facet


def psi_map(table: PositionTable, tower: Tower, n: int) -> dict[int, Facet]:
    adj = tower.level(n).adjacency()
    return {f: psi(table, tower, n, f, adj) for f in range(len(tower.level(n).faces))}


def covered_facets(mset: FacetMultiset, rules: DualRules = TRIB_DUAL, power: int = 3) -> set[Facet]:
    """Facets F of the stepped surface with E^power(F) contained in mset.

    Off the stepped surface the images of distinct facets may overlap, so the
    membership filter is needed for the answer to be a partition."""
    cands = set(mset.support())
    for _ in range(power):
        cands = {p for f in cands for p in preimages(rules, f)}
    out = set()
    for c in cands:
        if not membership(*c):
            continue
        img = apply_power(rules, FacetMultiset.of([c]), power)
        if mset.includes(img):
            out.add(c)
    return out


@dataclass
class BijectionReport:
    ok: bool
    tiles: int
    facets: set
    problems: list


def verify_bijection(table: PositionTable, tower: Tower, n: int) -> BijectionReport:
    patch = tower.level(n)
    adj = patch.adjacency()
    images = psi_map(table, tower, n)
    problems = []
    inverse: dict[Facet, int] = {}
    for f, facet in images.items():
        if facet in inverse:
            problems.append(f"tiles {inverse[facet]} and {f} both map to {facet}")
        inverse[facet] = f
        if THETA[patch.faces[f].type] != facet[1]:
            problems.append(f"tile {f} of type {patch.faces[f].type} maps to type {facet[1]}")
        if not membership(*facet):
            problems.append(f"tile {f} maps outside the stepped surface")
        single = phi0(table, patch, {f}, tower.base(n), adj)
        if apply_power(TRIB_DUAL, FacetMultiset.of([facet]), 3) != single:
            problems.append(f"E^3 of the image of tile {f} differs from its multiset")
    whole = phi0(table, patch, set(range(len(patch.faces))), tower.base(n), adj)
    expected = covered_facets(whole)
    if set(images.values()) != expected:
        problems.append("image set differs from the facets covered by the patch multiset")
    return BijectionReport(not problems, len(images), set(images.values()), problems)


# -- sliding block code --------------------------------------------------------


def block_code_table(table: PositionTable) -> dict[Pair, tuple[int, int, tuple[int, int, int]]]:
    """For each class read left to right: (left facet type, right facet type, displacement)."""
    out = {}
    for pair, v in table.values.items():
        tl, tr = pair[0][0], pair[1][0]
        d = M3 @ (np.array(v) + np.array(SHIFT[tr]) - np.array(SHIFT[tl]))
        out[pair] = (THETA[tl], THETA[tr], tuple(int(x) for x in d))
    return out


def rebuild_stepped(code, patch, seed: int, seed_facet: Facet, steps: int | None = None) -> dict[int, Facet]:
    """Place facets tile by tile from one seed, using only local adjacency rules."""
    placed = {seed: seed_facet}
    queue = deque([(seed, 0)])
    adj = patch.adjacency()
    while queue:
        f, d = queue.popleft()
        if steps is not None and d >= steps:
            continue
        for g in sorted(adj[f]):
            if g in placed:
                continue
            p = oriented_pair(patch, patch.shared_half_edges(f, g)[0])
            s = pair_orientation(p)
            tl, tr, disp = code[normalize_pair(p)]
            if s < 0:
                tl, tr = tr, tl
                disp = tuple(-x for x in disp)
            x = placed[f][0]
            placed[g] = ((x[0] + disp[0], x[1] + disp[1], x[2] + disp[2]), tr)
            queue.append((g, d + 1))
    return placed
