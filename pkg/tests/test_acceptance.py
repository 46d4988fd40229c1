"""End-to-end acceptance checks, one test per criterion.

Each test records a one-line verdict; the lines are printed together in the
terminal summary (see conftest.py) so a plain `pytest` run shows all twelve.
"""

import random
import re
import time

import numpy as np
from toposub import reference as ref
from toposub.cli import main
from toposub.cwpatch import core
from toposub.dual import (SEED, TRIB_DUAL, FacetMultiset, apply_power, hand_rules,
                          image_facet, iterate_seed, membership)
from toposub.geometry import (check_step_tiling, commutation_defect, hex_valences,
                              ifs_check, rauzy_cloud, realize_hex)
from toposub.linkage import (THETA, block_code_table, phi0, psi_map, rebuild_stepped,
                             verify_bijection, verify_commutation_nested)
from toposub.position import (TRIB_REFERENCE, group_values, typed_key, verify_loops,
                              verify_matrix_relation)
from toposub.symbolic import tribonacci_pisot
from toposub.topo import Tower, configuration_graph, normalize_pair, parse_pair, vertex_heredity_graph

VERDICTS: list[str] = []


def record(n, ok, desc, started):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} - {desc} ({time.perf_counter() - started:.1f}s)"
    VERDICTS.append(line)
    print(line)
    return ok


def test_criterion_01_compatibility(tmp_path, capsys):
    t0 = time.perf_counter()
    code = main(["check", "tribonacci.sub", "--dot", str(tmp_path)])
    out = capsys.readouterr().out
    dot = (tmp_path / "edges.dot").read_text()
    nodes = {normalize_pair(parse_pair(m)) for m in re.findall(r'^\s*"([^"]+)";$', dot, re.M)}
    ok = code == 0 and out.startswith("compatible") and nodes == ref.edge_pairs()
    assert record(1, ok, f"check declares compatible, {len(nodes)} edge-graph nodes equal the reference 18", t0)


def test_criterion_02_core_property(tower):
    t0 = time.perf_counter()
    sizes = [len(core(tower.level(n))) for n in (1, 2, 3)]
    ok = sizes[0] == 0 and sizes[1] == 0 and sizes[2] > 0
    assert record(2, ok, f"core sizes of levels 1..3 are {sizes}", t0)


def test_criterion_03_vertex_analysis(trib, tower):
    t0 = time.perf_counter()
    vg = vertex_heredity_graph(trib)
    bad = [(n, v) for n in range(7) for v in tower.level(n).interior_vertices()
           if tower.level(n).valence(v) not in (2, 3)]
    ok = vg.divided == {"C0", "C5"} and vg.bounded_valence and not bad
    assert record(3, ok, f"divided vertices {sorted(vg.divided)}, bounded valence, "
                         f"{len(bad)} interior vertices outside {{2,3}} up to level 6", t0)


def test_criterion_04_configuration_graph(trib):
    t0 = time.perf_counter()
    cg = configuration_graph(trib)
    ok = cg.nodes == set(ref.config_arcs()) and len(cg.nodes) == 16
    assert record(4, ok, f"{len(cg.nodes)} configurations equal the reference set", t0)


def test_criterion_05_dual_engine():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    facets = [(tuple(rng.randint(-30, 30) for _ in range(3)), rng.randint(1, 3)) for _ in range(100)]
    generic_ok = all(sorted(image_facet(TRIB_DUAL, f)) == sorted(hand_rules(f)) for f in facets)
    counts, prev, mono, inside, simple = [], SEED, True, True, True
    for n in range(6):
        cur = iterate_seed(TRIB_DUAL, n, check=False)
        counts.append(len(cur))
        simple &= cur.is_simple()
        mono &= cur.includes(prev)
        inside &= all(membership(*f) for f in cur)
        prev = cur
    ok = generic_ok and simple and mono and inside and counts == [3, 5, 9, 17, 31, 57]
    assert record(5, ok, f"generic rules match on 100 facets, counts {counts}, simple, monotone, "
                         "all facets on the stepped surface", t0)


def test_criterion_06_position_map(tower, table):
    t0 = time.perf_counter()
    got = sorted(group_values(table, table.groups))
    want = sorted(typed_key(*r) for r in TRIB_REFERENCE)
    loop = np.array([-1, 0, 2]) + np.array([0, 2, -3]) + np.array([1, -2, 1])
    loops = verify_loops(table, tower.level(6))
    rel = verify_matrix_relation(table, tower, 6)
    instance = (TRIB_DUAL.m_inv @ np.array([-1, 2, -1])).tolist()
    ok = got == want and not loop.any() and loops.ok and rel.ok and instance == [2, -1, -2]
    assert record(6, ok, f"{len(got)} class values match, {loops.checked} loops vanish on level 6, "
                         f"matrix relation on {rel.checked} edges, M^-1(-1,2,-1) = {tuple(instance)}", t0)


def test_criterion_07_commutation(tower, table):
    t0 = time.perf_counter()
    rep = verify_commutation_nested(table, tower, levels=4, base_level=2)
    assert record(7, rep.ok, f"{rep.checked} pointed patches (sigma^n(C), T), n <= 4, "
                             "T in sigma^2(C)", t0), rep.witness


def test_criterion_08_bijection(tower, table):
    t0 = time.perf_counter()
    n = 6
    patch = tower.level(n)
    rep = verify_bijection(table, tower, n)
    images = psi_map(table, tower, n)
    adj = patch.adjacency()
    types_ok = all(images[f][1] == THETA[patch.faces[f].type] for f in images)
    lift_ok = all(apply_power(TRIB_DUAL, FacetMultiset.of([images[f]]), 3)
                  == phi0(table, patch, {f}, tower.base(n), adj) for f in images)
    injective = len(set(images.values())) == len(images)
    inside = all(membership(*x) for x in images.values())
    ok = rep.ok and types_ok and lift_ok and injective and inside and len(images) >= 57
    assert record(8, ok, f"Psi injective on {len(images)} tiles of level 6, image on the stepped "
                         "surface, types A3 B2 C1, E^3 lifts agree", t0), rep.problems[:3]


def test_criterion_09_block_code(tower, table):
    t0 = time.perf_counter()
    n = 5
    want = psi_map(table, tower, n)
    seed = tower.base(n)
    got = rebuild_stepped(block_code_table(table), tower.level(n), seed, want[seed])
    ok = set(got.values()) == set(want.values()) and got == want
    assert record(9, ok, f"block-code rebuild from one seed gives the {len(want)} facets of level 5", t0)


def test_criterion_10_geometry():
    t0 = time.perf_counter()
    p = tribonacci_pisot()
    grid = np.array(np.meshgrid(*[np.arange(-50, 51, 5)] * 3)).reshape(3, -1).T
    defect = commutation_defect(p, grid)
    ifs = ifs_check(rauzy_cloud(10_000), tol=0.05)
    step = check_step_tiling(radius=2)
    ok = defect < 1e-9 and ifs.ok and step.ok and step.valences <= {3, 4, 5, 6}
    worst = max(ifs.defects.values())
    assert record(10, ok, f"projection defect {defect:.1e}, worst IFS defect {worst:.4f}, step window "
                          f"disjoint with valences {sorted(step.valences)}", t0), step.problems


def test_criterion_11_second_dataset(tau, capsys):
    t0 = time.perf_counter()
    code = main(["check", "tau.sub"])
    out = capsys.readouterr().out
    m = re.search(r"core at \((\w+),(\d+)\)", out)
    counts = [len(Tower(tau, "A").level(n)) for n in range(6)]
    ok = (code == 0 and out.startswith("compatible") and m is not None and int(m.group(2)) <= 12
          and counts == [1, 2, 3, 4, 6, 9])
    where = m.group(0) if m else "no core"
    assert record(11, ok, f"tau compatible, {where}, counts from A {counts}", t0)


def test_criterion_12_hex_realization(tower):
    t0 = time.perf_counter()
    patch = tower.level(4)
    emb = realize_hex(patch)
    vals = set(hex_valences(emb, patch).values())
    ok = emb.ok and vals == {3}
    assert record(12, ok, f"level 4 embeds on {len(emb.cells)} hexagons without overlap, "
                          f"interior valences {sorted(vals)}", t0), emb.problems[:3]
