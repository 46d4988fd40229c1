import pytest
from hypothesis import given, strategies as st

from toposub.cwpatch import (HostTooSmall, Patch, PatchError, canonical_cycle, core, cut_tiles,
                             enclosing_disc, noncut_boundary_tile, thick_boundary_and_core, validate_patch,
                             wreath)


def squares_strip(n):
    """n unit squares in a row, square k glued to square k+1 along its edge 1."""
    glue = [(k, 1, k + 1, 3) for k in range(n - 1)]
    return Patch.glue({"S": 4}, ["S"] * n, glue)


@pytest.mark.parametrize("t,k", [("C", 10), ("A", 6)])
def test_single_tile(t, k):
    rep = validate_patch(Patch.single(t, k))
    assert rep.valid
    assert (rep.vertices, rep.edges, rep.faces, rep.boundary_length) == (k, k, 1, k)


def test_annulus_rejected():
    p = Patch.glue({"S": 4}, ["S", "S"], [(0, 0, 1, 0), (0, 2, 1, 2)])
    rep = validate_patch(p)
    assert not rep.valid
    assert rep.euler == 0


def test_glue_rejects_double_use():
    with pytest.raises(PatchError):
        Patch.glue({"S": 4}, ["S", "S", "S"], [(0, 1, 1, 3), (0, 1, 2, 3)])


def test_levels_are_discs(tower):
    for n in range(7):
        p = tower.level(n)
        rep = validate_patch(p)
        assert rep.valid, rep.problems
        assert p.euler() == 1
        assert len(p.boundary_cycles()) == 1


def test_wreath_examples(tower):
    assert wreath(Patch.single("C", 10), 0) == set()
    p1 = tower.level(1)
    a = next(f for f, face in enumerate(p1.faces) if face.type == "A")
    assert wreath(p1, a) == set(range(3)) - {a}
    p2 = tower.level(2)
    assert any(face.type == "C" and wreath(p2, f) == set(range(5)) - {f} for f, face in enumerate(p2.faces))
    with pytest.raises(PatchError):
        wreath(p1, 7)


def test_wreath_symmetric(tower):
    p = tower.level(5)
    for f in range(len(p)):
        for g in wreath(p, f):
            assert f in wreath(p, g)


def test_cut_tiles():
    assert cut_tiles(Patch.single("A", 6)) == set()
    assert cut_tiles(squares_strip(3)) == {1}
    assert cut_tiles(squares_strip(5)) == {1, 2, 3}


def test_cut_tiles_small_levels(tower):
    assert cut_tiles(tower.level(1)) == set()


def test_noncut_boundary_tile(tower):
    assert noncut_boundary_tile(Patch.single("C", 10)) == 0
    for n in range(1, 7):
        p = tower.level(n)
        t = noncut_boundary_tile(p)
        assert t not in cut_tiles(p)
        assert any(f == t for f, _ in p.boundary_half_edges())


def test_core_examples(tower):
    assert core(tower.level(1)) == set()
    assert core(tower.level(2)) == set()
    assert core(tower.level(3))


def test_thick_boundary_partition(tower):
    for n in range(1, 7):
        p = tower.level(n)
        thick, inner = thick_boundary_and_core(p)
        assert thick | inner == set(range(len(p))) and not thick & inner
        bnd = p.boundary_vertices()
        for f in inner:
            assert not bnd.intersection(p.faces[f].verts)


def test_enclosing_disc(tower):
    p = tower.level(6)
    inner = core(p)
    adj = p.adjacency()
    f = min(inner)
    g = min(x for x in adj[f] if x in inner)
    assert enclosing_disc(p, [f, g, f]) == ({f, g}, 2)


def test_enclosing_disc_around_vertex(tower):
    p = tower.level(4)
    inner = core(p)
    for v in p.interior_vertices():
        fan, _ = p.star(v)
        tiles = [f for f, _ in fan]
        if len(tiles) == 3 and set(tiles) <= inner:
            disc, area = enclosing_disc(p, tiles + [tiles[0]])
            assert area == 3 and disc == set(tiles)
            break
    else:
        pytest.fail("no valence-3 vertex surrounded by core tiles")


def test_enclosing_disc_host_too_small(tower):
    p = tower.level(2)
    with pytest.raises(HostTooSmall):
        enclosing_disc(p, [0, min(p.adjacency()[0]), 0])


def test_loop_area_at_least_two(tower):
    p = tower.level(6)
    inner = core(p)
    adj = p.adjacency()
    for f in sorted(inner)[:10]:
        for g in adj[f] & inner:
            assert enclosing_disc(p, [f, g, f])[1] >= 2


@given(st.lists(st.sampled_from(["A0", "B1", "C2", "C5", "A4"]), min_size=1, max_size=6), st.integers(0, 5),
       st.booleans())
def test_canonical_cycle_invariant(seq, shift, flip):
    seq = tuple(seq)
    r = shift % len(seq)
    moved = seq[r:] + seq[:r]
    if flip:
        moved = tuple(reversed(moved))
    assert canonical_cycle(moved) == canonical_cycle(seq)


def test_dump_round_numbers(tower):
    text = tower.level(2).dump()
    assert text.startswith("faces 5\n")
    assert text.count("\nH ") == tower.level(2).n_edges() - len(tower.level(2).boundary_half_edges())
