import dataclasses

import pytest

from toposub import reference as ref
from toposub.cwpatch import core, validate_patch
from toposub.subfile import parse
from toposub.topo import (CannotInflate, Tower, check_compatibility, config_graph_dot, configuration_graph,
                          core_property, descendants, edge_graph_dot, inflate, interior_classes, nesting_exponent,
                          normalize_pair, pair_orientation, parse_config, parse_pair, pointed_substitute,
                          vertex_graph_dot, vertex_heredity_graph)

IDENTITY = """
PROTOTILES
S 4
IMAGES
S S
VERTEX_IMAGES
S 0 0:0
S 1 0:1
S 2 0:2
S 3 0:3
EDGE_IMAGES
S 0-1 0:0-1
S 1-2 0:1-2
S 2-3 0:2-3
S 3-0 0:3-0
"""


def pairs(*texts):
    return [normalize_pair(parse_pair(t)) for t in texts]


def test_pair_normalization_is_class_invariant():
    p = parse_pair("[B45,C76]")
    (e, f) = p
    flip = (f, e)
    rev = ((e[0], e[2], e[1]), (f[0], f[2], f[1]))
    assert normalize_pair(p) == normalize_pair(flip) == normalize_pair(rev)
    assert pair_orientation(p) == -pair_orientation(flip)
    assert pair_orientation(parse_pair("[B01,B10]")) == 0


def test_descendants_worked_example(trib):
    got = descendants(trib, parse_pair("[B45,C76]"))
    assert got == pairs("[C34,C10]", "[C45,C09]", "[C56,C98]")


def test_descendants_single_edge(trib):
    assert descendants(trib, parse_pair("[A01,A10]")) == pairs("[B23,B32]")


def test_descendant_arc_in_edge_graph(trib):
    res = check_compatibility(trib)
    assert normalize_pair(parse_pair("[B45,C76]")) in res.graph.arcs[normalize_pair(parse_pair("[A23,B05]"))]


def test_tribonacci_edge_graph(trib):
    res = check_compatibility(trib)
    assert res.compatible
    assert res.graph.nodes == ref.edge_pairs()
    assert len(res.graph.nodes) == 18


def test_edge_graph_is_a_fixpoint(trib):
    g = check_compatibility(trib).graph
    for node in g.nodes:
        assert set(descendants(trib, node)) <= g.nodes
        assert g.arcs[node] == descendants(trib, node)


def test_interior_edges_are_graph_nodes(trib, tau):
    for presub in (trib, tau):
        nodes = check_compatibility(presub).graph.nodes
        for t in presub.types:
            tower = Tower(presub, t)
            for p in range(7):
                assert interior_classes(tower.level(p)) <= nodes


def test_corrupted_substitution_is_caught(trib):
    edges = {t: [list(path) for path in paths] for t, paths in trib.edge_images.items()}
    edges["B"][4] = edges["B"][4][:2]
    broken = dataclasses.replace(trib, edge_images=edges)
    assert broken.validate()
    res = check_compatibility(broken)
    assert not res.compatible
    assert res.witness == normalize_pair(parse_pair("[B45,C76]"))
    assert res.lengths == (2, 3)


@pytest.mark.parametrize("n,counts", [(1, {"A": 1, "B": 1, "C": 1}), (2, {"A": 1, "B": 2, "C": 2}),
                                      (3, {"A": 2, "B": 3, "C": 4})])
def test_iterate_type_counts(tower, n, counts):
    assert tower.level(n).type_counts() == counts


def test_type_count_recurrence(tower):
    assert [len(tower.level(n)) for n in range(8)] == ref.TRIB_TILE_COUNTS
    for n in range(8):
        c = tower.level(n).type_counts()
        a, b, cc = c.get("A", 0), c.get("B", 0), c.get("C", 0)
        assert tower.level(n + 1).type_counts() == {"A": cc, "B": a + cc, "C": b + cc}


def test_vertex_graph(trib):
    vg = vertex_heredity_graph(trib)
    assert vg.divided == ref.TRIB_DIVIDED
    assert vg.bounded_valence
    assert "B3" in vg.arcs["A1"] and "C2" in vg.arcs["B3"]


def test_interior_valences(tower):
    for n in range(7):
        p = tower.level(n)
        assert {p.valence(v) for v in p.interior_vertices()} <= {2, 3}


def test_configuration_graph(trib):
    cg = configuration_graph(trib)
    assert cg.nodes == set(ref.config_arcs())
    assert len(cg.nodes) == 16
    assert {parse_config("[C5,A4]"), parse_config("[C6,A3,B5]")} <= cg.seeds
    for node in cg.nodes:
        assert len(cg.arcs[node]) == 1
    for loop in ("[A0,B2,C1]", "[B1,C8,C2]"):
        assert cg.arcs[parse_config(loop)] == {parse_config(loop)}
    assert cg.arcs == ref.config_arcs()


def test_configurations_closed(trib, tower):
    nodes = configuration_graph(trib).nodes
    for n in range(7):
        p = tower.level(n)
        assert {p.configuration(v) for v in p.interior_vertices()} <= nodes


def test_core_property(trib, tau):
    assert core_property(trib) == ("C", 3)
    found = core_property(tau, 12)
    assert found is not None and found[1] <= 12


def test_core_property_never_for_identity():
    ident = parse(IDENTITY)
    assert check_compatibility(ident).compatible
    assert core_property(ident, 6) is None
    with pytest.raises(CannotInflate):
        nesting_exponent(ident, "S", 4)


def test_inflate(trib, tower):
    assert nesting_exponent(trib, "C") == 3
    inf = inflate(trib, "C", 2)
    assert inf.k == 3
    small, big = inf.patch(1), inf.patch(2)
    assert len(small) == len(tower.level(3)) and len(big) == len(tower.level(6))
    ids = [inf.identify(1, f) for f in range(len(small))]
    assert len(set(ids)) == len(ids)
    assert all(small.faces[f].type == big.faces[g].type for f, g in zip(range(len(small)), ids))
    # adjacency is carried along
    for f, nbrs in small.adjacency().items():
        for g in nbrs:
            assert ids[g] in big.adjacency()[ids[f]]
    # the identified copy is the image of the base tile, which sits in the core
    assert inf.identify(0, 0) in core(inf.patch(1))
    assert validate_patch(big).valid


def test_pointed_substitution(trib):
    t = Tower(trib, "C")
    faces, b = pointed_substitute(t, 0, {0}, 0)
    assert faces == {0, 1, 2} and t.level(1).faces[b].type == "C"
    ta = Tower(trib, "A")
    faces, b = pointed_substitute(ta, 0, {0}, 0)
    assert faces == {0} and ta.level(1).faces[b].type == "B"
    f = 0
    for n in range(3):
        f = t.b(n, f)
        assert t.level(n + 1).faces[f].type == "C"


def test_base_tile_is_b_chain(tower):
    f = 0
    for n in range(6):
        f = tower.b(n, f)
        assert f == tower.base(n + 1)


def test_tau(tau):
    res = check_compatibility(tau)
    assert res.compatible
    t = Tower(tau, "A")
    assert [len(t.level(n)) for n in range(6)] == ref.TAU_COUNTS_FROM_A
    for n in range(8):
        assert validate_patch(t.level(n)).valid


def test_dot_exports(trib):
    res = check_compatibility(trib)
    text = edge_graph_dot(res.graph)
    assert text.startswith("digraph edges {") and '"[A23,B05]"' in text
    assert '"A1" -> "B3";' in vertex_graph_dot(vertex_heredity_graph(trib))
    assert '"[A0,B2,C1]" -> "[A0,B2,C1]";' in config_graph_dot(configuration_graph(trib))
