"""Facets of the unit cube lattice and the dual substitution acting on them.

A facet [x, i]* is the unit square at x spanned by the two basis vectors other
than e_i. Multisets of facets are sparse maps {(x, i): multiplicity}.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterable

import numpy as np

from .symbolic import (PisotData, Substitution, Unsupported, abelianize, incidence_matrix,
                       matrix_inverse, tribonacci_pisot, TRIBONACCI)

Vec = tuple[int, int, int]
Facet = tuple[Vec, int]


class InvariantViolation(ValueError):
    pass


class FacetMultiset(Counter):
    """Counter keyed by (x, i) with non-negative integer multiplicities."""

    @classmethod
    def of(cls, facets: Iterable[Facet]) -> "FacetMultiset":
        return cls((tuple(int(c) for c in x), int(i)) for x, i in facets)

    def is_simple(self) -> bool:
        return all(m <= 1 for m in self.values())

    def support(self) -> set[Facet]:
        return {f for f, m in self.items() if m > 0}

    def translate(self, u) -> "FacetMultiset":
        out = FacetMultiset()
        for (x, i), m in self.items():
            out[(x[0] + int(u[0]), x[1] + int(u[1]), x[2] + int(u[2])), i] += m
        return out

    def includes(self, other: "FacetMultiset") -> bool:
        return all(self.get(f, 0) >= m for f, m in other.items())

    def weights(self) -> dict[Vec, tuple[int, int, int]]:
        """The equivalent map Z^3 -> Z^3_{>=0}."""
        out: dict[Vec, list[int]] = {}
        for (x, i), m in self.items():
            out.setdefault(x, [0, 0, 0])[i - 1] += m
        return {x: tuple(v) for x, v in out.items()}

    def dump(self) -> str:
        return "".join(f"{x[0]} {x[1]} {x[2]} {i} {m}\n" for (x, i), m in sorted(self.items()))


SEED = FacetMultiset.of([((0, 0, 0), 1), ((0, 0, 0), 2), ((0, 0, 0), 3)])


@dataclass(frozen=True)
class DualRules:
    """For each source type i: the (prefix vector, target type) pairs."""

    rules: dict[int, tuple[tuple[Vec, int], ...]]
    m: np.ndarray
    m_inv: np.ndarray


def build_dual(subst: Substitution) -> DualRules:
    m = incidence_matrix(subst)
    try:
        m_inv = matrix_inverse(m)
    except Unsupported:
        raise Unsupported("dual substitution needs a unimodular matrix") from None
    d = subst.size
    rules: dict[int, list[tuple[Vec, int]]] = {i: [] for i in range(1, d + 1)}
    for j, img in enumerate(subst.images, start=1):
        for pos, letter in enumerate(img):
            rules[letter].append((abelianize(img[:pos], d), j))
    return DualRules({i: tuple(r) for i, r in rules.items()}, m, m_inv)


TRIB_DUAL = build_dual(TRIBONACCI)


def image_facet(rules: DualRules, facet: Facet) -> list[Facet]:
    x, i = facet
    out = []
    for p, j in rules.rules[i]:
        y = rules.m_inv @ np.array([x[0] + p[0], x[1] + p[1], x[2] + p[2]], dtype=np.int64)
        out.append(((int(y[0]), int(y[1]), int(y[2])), j))
    return out


def apply_dual(rules: DualRules, mset: FacetMultiset) -> FacetMultiset:
    out = FacetMultiset()
    for facet, m in sorted(mset.items()):
        if m <= 0:
            continue
        for g in image_facet(rules, facet):
            out[g] += m
    return out


def apply_power(rules: DualRules, mset: FacetMultiset, n: int) -> FacetMultiset:
    for _ in range(n):
        mset = apply_dual(rules, mset)
    return mset


def hand_rules(facet: Facet) -> list[Facet]:
    """The Tribonacci dual substitution written out case by case."""
    x, i = facet
    y = TRIB_DUAL.m_inv @ np.array(x, dtype=np.int64)
    y = (int(y[0]), int(y[1]), int(y[2]))
    e3 = (y[0], y[1], y[2] + 1)
    if i == 1:
        return [(y, 1), (y, 2), (y, 3)]
    if i == 2:
        return [(e3, 1)]
    return [(e3, 2)]


def iterate_seed(rules: DualRules, n: int, check: bool = True) -> FacetMultiset:
    cur = SEED.copy()
    cur = FacetMultiset(cur)
    for k in range(n):
        nxt = apply_dual(rules, cur)
        if check and not nxt.is_simple():
            bad = next(f for f, m in nxt.items() if m > 1)
            raise InvariantViolation(f"facet {bad} has multiplicity {nxt[bad]} at step {k + 1}")
        cur = nxt
    return cur


def preimages(rules: DualRules, facet: Facet) -> list[Facet]:
    """Facets whose image contains the given facet."""
    z, j = facet
    mz = rules.m @ np.array(z, dtype=np.int64)
    out = []
    for i, rs in rules.rules.items():
        for p, jj in rs:
            if jj == j:
                x = mz - np.array(p, dtype=np.int64)
                out.append(((int(x[0]), int(x[1]), int(x[2])), i))
    return out


# -- the stepped surface -------------------------------------------------------


def membership(x: Vec, i: int, pisot: PisotData | None = None) -> bool:
    """0 <= <x, w> < <e_i, w>, decided exactly."""
    pisot = pisot or tribonacci_pisot()
    h = pisot.height(x)
    return h.sign() >= 0 and (h - pisot.w[i - 1]).sign() < 0


def stepped_window(pisot: PisotData | None = None, radius: int = 2) -> list[Facet]:
    pisot = pisot or tribonacci_pisot()
    rng = range(-radius, radius + 1)
    return [(x, i) for x in product(rng, rng, rng) for i in (1, 2, 3)
            if membership(x, i, pisot)]


def facet_corners(facet: Facet) -> np.ndarray:
    """The four corners of [x, i]* in counter-clockwise order seen from e_i."""
    x, i = facet
    a, b = [k for k in range(3) if k != i - 1]
    if i == 2:
        a, b = b, a
    ea, eb = np.eye(3, dtype=np.int64)[a], np.eye(3, dtype=np.int64)[b]
    x = np.array(x, dtype=np.int64)
    return np.array([x, x + ea, x + ea + eb, x + eb])
