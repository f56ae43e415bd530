import pytest

from mcgsplit.triangulation import (
    Triangulation,
    UnflippableEdgeError,
    surface_triangulation,
)


@pytest.mark.parametrize("genus", [1, 2, 3, 4])
def test_fan_shape(genus):
    tri = surface_triangulation(genus)
    assert tri.genus == genus
    assert tri.num_edges == 6 * genus - 3
    assert len(tri.triangles) == 4 * genus - 2
    # single vertex: the rotational walk closes up through every corner
    assert len(tri.vertex_corners) == 3 * len(tri.triangles)
    assert len(set(tri.vertex_corners)) == len(tri.vertex_corners)


@pytest.mark.parametrize("genus", [1, 2, 3])
def test_edge_bookkeeping(genus):
    tri = surface_triangulation(genus)
    for e in range(tri.num_edges):
        s1, s2 = tri.edge_slots[e]
        assert s1 != s2
        assert tri.edge_at(*s1) == e and tri.edge_at(*s2) == e
        assert tri.is_reference_slot(*s1)
        assert not tri.is_reference_slot(*s2)
        assert tri.partner(*s1) == s2 and tri.partner(*s2) == s1
    # each edge contributes exactly two germs around the vertex
    counts = [0] * tri.num_edges
    for e in tri.germ_edges:
        counts[e] += 1
    assert counts == [2] * tri.num_edges


def test_edge_classes_genus2():
    tri = surface_triangulation(2)
    assert tri.edge_names == ("a1", "b1", "a2", "b2", "d2", "d3", "d4", "d5", "d6")
    assert tri.edge_classes[0] == (1, 0, 0, 0)
    assert tri.edge_classes[1] == (0, 1, 0, 0)
    assert tri.edge_classes[2] == (0, 0, 1, 0)
    assert tri.edge_classes[3] == (0, 0, 0, 1)
    # diagonals carry minus the boundary-word prefix
    assert tri.edge_classes[4] == (-1, -1, 0, 0)
    assert tri.edge_classes[5] == (0, -1, 0, 0)
    # d4 closes off the first handle, so its class vanishes
    assert tri.edge_classes[6] == (0, 0, 0, 0)
    assert tri.edge_words[0] == (1,)
    assert tri.edge_words[6] != ()


def test_genus_guard():
    with pytest.raises(ValueError):
        surface_triangulation(0)


@pytest.mark.parametrize("genus", [1, 2])
def test_flip_is_an_involution(genus):
    tri = surface_triangulation(genus)
    flippable = 0
    for e in range(tri.num_edges):
        try:
            once = tri.flip(e)
        except UnflippableEdgeError:
            continue
        flippable += 1
        twice = once.flip(e)
        assert twice.same_labelled_complex(tri)
    assert flippable > 0


@pytest.mark.parametrize("genus", [1, 2])
def test_flip_weight_involution(genus):
    from mcgsplit.curves import standard_probes

    tri = surface_triangulation(genus)
    vectors = [v for vs in standard_probes(tri) for v in vs]
    for e in range(tri.num_edges):
        try:
            quad = tri.flip_quad(e)
        except UnflippableEdgeError:
            continue
        for w in vectors:
            w1 = tri.flip_weight(e, w)
            w2 = tri.flip(e).flip_weight(e, w1)
            assert w2 == w


def test_flip_weight_tropical_rule():
    tri = surface_triangulation(2)
    w = (0, 1, 0, 0, 1, 1, 0, 0, 0)
    e = 1
    p1, q1, p2, q2 = tri.flip_quad(e)
    got = tri.flip_weight(e, w)
    assert got[e] == max(w[p1] + w[p2], w[q1] + w[q2]) - w[e]
    assert all(got[k] == w[k] for k in range(tri.num_edges) if k != e)


def test_signature_ignores_triangle_order():
    tri = surface_triangulation(2)
    shuffled = Triangulation(
        tuple(reversed(tri.triangles)), tri.num_edges, tri.genus
    )
    assert tri.same_labelled_complex(shuffled)
    rotated = Triangulation(
        (tri.triangles[0][1:] + tri.triangles[0][:1],) + tri.triangles[1:],
        tri.num_edges,
        tri.genus,
    )
    assert tri.same_labelled_complex(rotated)


def test_isomorphisms_include_identity():
    tri = surface_triangulation(2)
    perms = list(tri.isomorphisms_to(tri))
    assert tuple(range(tri.num_edges)) in perms
    for perm in perms:
        assert sorted(perm) == list(range(tri.num_edges))


def test_isomorphisms_transport_structure():
    from mcgsplit.curves import relabel

    tri = surface_triangulation(2)
    flipped = tri.flip(1).flip(1)
    # flipping twice restores the labelled complex, so an isomorphism exists
    perms = list(flipped.isomorphisms_to(tri))
    assert perms
    for perm in perms:
        assert relabel(flipped, perm).same_labelled_complex(tri)
