"""Verification suites over the bundled datasets, one per engine."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import reference as ref
from .cwpatch import core, validate_patch
from .dual import (SEED, TRIB_DUAL, FacetMultiset, apply_dual, hand_rules, image_facet,
                   iterate_seed, membership, stepped_window)
from .geometry import check_step_tiling, commutation_defect, hex_valences, ifs_check, rauzy_cloud, realize_hex
from .linkage import (block_code_table, psi_map, rebuild_stepped, verify_bijection, verify_commutation,
                      verify_commutation_nested)
from .position import TRIB_REFERENCE, group_values, solve_position_table, typed_key, verify_loops, verify_matrix_relation, vertex_shapes
from .subfile import builtin, dump, parse
from .symbolic import TRIB_RING, TRIBONACCI, fixed_point_prefix, tribonacci_pisot, word_str
from .topo import Tower, check_compatibility, configuration_graph, core_property, nesting_exponent, vertex_heredity_graph


@dataclass
class Outcome:
    suite: str
    name: str
    ok: bool
    detail: str = ""
    witness: object = None
    seconds: float = 0.0

    def line(self) -> str:
        head = f"{'PASS' if self.ok else 'FAIL'} {self.suite}.{self.name}"
        tail = f" ({self.detail})" if self.detail else ""
        if not self.ok and self.witness is not None:
            tail += " witness=" + json.dumps(self.witness, default=str)
        return head + tail


class Context:
    """Shared, lazily built objects for the suites."""

    @cached_property
    def trib(self):
        return builtin("tribonacci")

    @cached_property
    def tower(self):
        return Tower(self.trib, "C")

    @cached_property
    def table(self):
        return solve_position_table(self.tower)


def _symbolic(ctx):
    p = tribonacci_pisot()
    yield "eigenvectors", p.check_eigen(), "w and u_r are exact eigenvectors", None
    b = TRIB_RING.beta
    norm_ok = (p.norm - (b ** 3 * 2 - b ** 2 + 1)).coeffs == (0, 0, 0)
    yield "normalizer", norm_ok, f"<u_r,w> = {p.norm}", None
    pre = word_str(fixed_point_prefix(TRIBONACCI, 7))
    yield "fixed_point", pre == "1213121", pre, None
    rad = float(np.max(np.abs(np.linalg.eigvals(p.h))))
    yield "contraction", rad < 1, f"spectral radius of h {rad:.5f}", None


def _cwpatch(ctx):
    for n in range(7):
        rep = validate_patch(ctx.tower.level(n))
        yield f"valid_level_{n}", rep.valid, f"{len(ctx.tower.level(n))} faces", rep.problems[:3]


def _topo(ctx):
    res = check_compatibility(ctx.trib)
    nodes = res.graph.nodes if res.compatible else set()
    yield "compatible", res.compatible, f"{len(nodes)} balanced pairs", res.witness
    diff = sorted(map(str, nodes ^ ref.edge_pairs()))
    yield "edge_graph_matches_reference", not diff, "18 classes", diff
    cores = [len(core(ctx.tower.level(n))) for n in range(1, 4)]
    yield "core_appears_at_3", cores[0] == cores[1] == 0 and cores[2] > 0, f"core sizes {cores}", cores
    yield "core_property", core_property(ctx.trib) == ("C", 3), str(core_property(ctx.trib)), None
    yield "nesting_exponent", nesting_exponent(ctx.trib, "C") == 3, "k = 3", None
    vg = vertex_heredity_graph(ctx.trib)
    yield "divided_vertices", vg.divided == ref.TRIB_DIVIDED, str(sorted(vg.divided)), sorted(vg.divided)
    yield "bounded_valence", vg.bounded_valence, "", None
    bad = []
    for n in range(7):
        patch = ctx.tower.level(n)
        bad += [(n, v, patch.valence(v)) for v in patch.interior_vertices() if patch.valence(v) not in (2, 3)]
    yield "interior_valence_2_or_3", not bad, "levels 0..6", bad[:3]
    cg = configuration_graph(ctx.trib)
    want = ref.config_arcs()
    same = cg.nodes == set(want) and all(cg.arcs.get(k, set()) == v for k, v in want.items())
    yield "configuration_graph", same, f"{len(cg.nodes)} configurations", sorted(map(str, cg.nodes ^ set(want)))
    tau = builtin("tau")
    rt = check_compatibility(tau)
    yield "tau_compatible", rt.compatible, "", rt.witness
    cp = core_property(tau, 12)
    yield "tau_core_property", cp is not None, str(cp), None
    tt = Tower(tau, "A")
    counts = [len(tt.level(n)) for n in range(6)]
    yield "tau_counts", counts == ref.TAU_COUNTS_FROM_A, str(counts), counts
    same = all(parse(dump(s), s.name) == s and dump(parse(dump(s))) == dump(s)
               for s in (ctx.trib, tau))
    yield "file_round_trip", same, "", None


def _dual(ctx):
    rng = random.Random(7)
    bad = []
    for _ in range(100):
        f = (tuple(rng.randint(-20, 20) for _ in range(3)), rng.randint(1, 3))
        if sorted(image_facet(TRIB_DUAL, f)) != sorted(hand_rules(f)):
            bad.append(f)
    yield "generic_matches_hand_rules", not bad, "100 random facets", bad[:3]
    counts, prev, mono = [], SEED, True
    for n in range(9):
        cur = iterate_seed(TRIB_DUAL, n)
        counts.append(len(cur))
        mono &= cur.includes(prev)
        prev = cur
    yield "seed_counts", counts == ref.FACET_COUNTS, str(counts), counts
    yield "seed_monotone", mono, "", None
    outside = [f for f in iterate_seed(TRIB_DUAL, 6) if not membership(*f)]
    yield "seed_in_stepped_surface", not outside, "E^6 of the seed", outside[:3]
    window = stepped_window(radius=3)
    seen: dict = {}
    clash = []
    for f in window:
        for g in image_facet(TRIB_DUAL, f):
            if g in seen:
                clash.append((seen[g], f))
            seen[g] = f
    yield "images_disjoint", not clash, f"{len(window)} facets", clash[:2]


def _position(ctx):
    tab = ctx.table
    got = sorted(group_values(tab, tab.groups))
    want = sorted(typed_key(*r) for r in TRIB_REFERENCE)
    yield "table_matches_reference", got == want, f"{len(got)} vectors", got
    loop = np.array([-1, 0, 2]) + np.array([0, 2, -3]) + np.array([1, -2, 1])
    yield "printed_loop", not loop.any(), "(-1,0,2)+(0,2,-3)+(1,-2,1)", loop.tolist()
    rep = verify_loops(tab, ctx.tower.level(6))
    yield "loops_vanish", rep.ok, f"{rep.checked} loops on level 6", rep.witness
    mrep = verify_matrix_relation(tab, ctx.tower, 6)
    yield "matrix_relation", mrep.ok, f"{mrep.checked} edges", mrep.witness
    m_inv = TRIB_DUAL.m_inv
    yield "printed_matrix_instance", (m_inv @ np.array([-1, 2, -1])).tolist() == [2, -1, -2], "", None
    shapes = vertex_shapes(tab, ctx.tower.level(6))
    yield "vertex_shapes", shapes == ref.reference_vertex_shapes(), f"{len(shapes)} shapes", None


def _linkage(ctx):
    rep = verify_commutation(ctx.table, ctx.tower, 4)
    yield "commutation", rep.ok, f"{rep.checked} pointed patches", rep.witness
    rep = verify_commutation_nested(ctx.table, ctx.tower, 4, 2)
    yield "commutation_base_in_level_2", rep.ok, f"{rep.checked} pointed patches", rep.witness
    for n in (1, 4, 6):
        b = verify_bijection(ctx.table, ctx.tower, n)
        same = b.facets == set(iterate_seed(TRIB_DUAL, n - 1))
        yield f"bijection_level_{n}", b.ok and same, f"{b.tiles} tiles", b.problems[:3]
    code = block_code_table(ctx.table)
    for n in (4, 5):
        want = psi_map(ctx.table, ctx.tower, n)
        seed = ctx.tower.base(n)
        got = rebuild_stepped(code, ctx.tower.level(n), seed, want[seed])
        diff = [f for f in want if got.get(f) != want[f]]
        yield f"block_code_level_{n}", not diff, f"{len(want)} tiles", diff[:3]


def _geometry(ctx):
    p = tribonacci_pisot()
    grid = np.array(np.meshgrid(*[np.arange(-100, 101, 10)] * 3)).reshape(3, -1).T
    d = commutation_defect(p, grid)
    yield "projection_commutes", d < 1e-9, f"defect {d:.2e}", d
    basis = p.plane_basis
    ortho = float(np.max(np.abs(basis @ basis.T - np.eye(2))))
    yield "plane_basis_orthonormal", ortho < 1e-12, f"{ortho:.1e}", ortho
    r = ifs_check(rauzy_cloud(10_000))
    yield "rauzy_ifs", r.ok, ", ".join(f"{v:.4f}" for v in r.defects.values()), r.worst
    r5, r10 = (float(np.max(np.linalg.norm(rauzy_cloud(n).points, axis=1))) for n in (50_000, 100_000))
    yield "rauzy_bounded", r10 < 1.01 * r5, f"radius {r5:.4f} -> {r10:.4f}", None
    s = check_step_tiling(2)
    yield "step_tiling", s.ok, f"valences {sorted(s.valences)}", s.problems
    for n in (1, 4, 6):
        emb = realize_hex(ctx.tower.level(n))
        vals = set(hex_valences(emb, ctx.tower.level(n)).values())
        yield f"hex_level_{n}", emb.ok and vals <= {3}, f"{len(emb.cells)} hexagons", emb.problems[:3]


SUITES = {
    "symbolic": _symbolic,
    "cwpatch": _cwpatch,
    "topo": _topo,
    "dual": _dual,
    "position": _position,
    "linkage": _linkage,
    "geometry": _geometry,
}


def run(suites=None, ctx: Context | None = None):
    ctx = ctx or Context()
    for name in suites or SUITES:
        gen = SUITES[name](ctx)
        while True:
            t0 = time.perf_counter()
            try:
                check, ok, detail, witness = next(gen)
            except StopIteration:
                break
            except Exception as exc:  # a crashing suite is a failure, not an abort
                yield Outcome(name, "error", False, type(exc).__name__, str(exc))
                break
            yield Outcome(name, check, bool(ok), detail, witness, time.perf_counter() - t0)
