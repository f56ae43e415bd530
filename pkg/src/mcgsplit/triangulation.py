"""One-vertex triangulations of closed oriented surfaces and edge flips.

The genus-g surface is built from the standard 4g-gon with boundary word
a1 b1 a1^-1 b1^-1 ... ag bg ag^-1 bg^-1, triangulated by the fan of
diagonals from one polygon corner.  All polygon corners map to a single
vertex, so the result has 6g-3 edges and 4g-2 triangles.

Conventions, used throughout the curve machinery:
  * triangle corners 0,1,2 are counterclockwise, side k is opposite
    corner k, so side k runs (ccw) from corner k+1 to corner k+2;
  * crossings along a side are ordered by that ccw direction, and a
    gluing matches position p on one side with position w-1-p on the
    other;
  * every edge has exactly two sides ("slots"); the first one in
    scanning order fixes the edge's reference direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache, cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

Slot = Tuple[int, int]  # (triangle index, side index 0..2)


class UnflippableEdgeError(ValueError):
    pass


@dataclass(frozen=True)
class Triangulation:
    """Immutable gluing table: one edge id per triangle side."""

    triangles: Tuple[Tuple[int, int, int], ...]
    num_edges: int
    genus: int
    # per-edge homology class in the reference direction, only meaningful
    # for the base (unflipped) triangulation of each genus
    edge_classes: Optional[Tuple[Tuple[int, ...], ...]] = field(default=None, compare=False)
    edge_names: Optional[Tuple[str, ...]] = field(default=None, compare=False)
    # loop class of each edge in pi_1 of the surface, reference direction,
    # as a word over letters 1..2g (odd = a_k, even = b_k); base state only
    edge_words: Optional[Tuple[Tuple[int, ...], ...]] = field(default=None, compare=False)

    @cached_property
    def edge_slots(self) -> Tuple[Tuple[Slot, Slot], ...]:
        found: List[List[Slot]] = [[] for _ in range(self.num_edges)]
        for t, tri in enumerate(self.triangles):
            for s, e in enumerate(tri):
                found[e].append((t, s))
        for e, slots in enumerate(found):
            assert len(slots) == 2, f"edge {e} has {len(slots)} sides"
        return tuple((slots[0], slots[1]) for slots in found)

    def edge_at(self, t: int, s: int) -> int:
        return self.triangles[t][s]

    def partner(self, t: int, s: int) -> Slot:
        a, b = self.edge_slots[self.edge_at(t, s)]
        return b if (t, s) == a else a

    def is_reference_slot(self, t: int, s: int) -> bool:
        return self.edge_slots[self.edge_at(t, s)][0] == (t, s)

    # -- vertex link ---------------------------------------------------

    @cached_property
    def vertex_corners(self) -> Tuple[Tuple[int, int], ...]:
        """Corners (t, k) in rotational order around the single vertex."""
        start = (0, 0)
        cycle = [start]
        cur = start
        while True:
            t, k = cur
            t2, s2 = self.partner(t, (k + 1) % 3)
            cur = (t2, (s2 + 1) % 3)
            if cur == start:
                break
            cycle.append(cur)
            assert len(cycle) <= 3 * len(self.triangles)
        assert len(cycle) == 3 * len(self.triangles), "not a one-vertex triangulation"
        return tuple(cycle)

    @cached_property
    def corner_index(self) -> Dict[Tuple[int, int], int]:
        return {c: i for i, c in enumerate(self.vertex_corners)}

    @cached_property
    def germ_edges(self) -> Tuple[int, ...]:
        """germ m sits between corner m and corner m+1; value is its edge id."""
        out = []
        for t, k in self.vertex_corners:
            out.append(self.edge_at(t, (k + 1) % 3))
        return tuple(out)

    def germ_of_slot_end(self, t: int, s: int, high: bool) -> int:
        """Germ index of one end of a slot.

        high=True is the position w-1 end of (t, s), which touches corner
        s+2 of t; the germ crossed when walking from that corner is this
        edge end.
        """
        if high:
            corner = (t, (s + 2) % 3)
        else:
            t2, s2 = self.partner(t, s)
            corner = (t2, (s2 + 2) % 3)
        return self.corner_index[corner]

    # -- flips ----------------------------------------------------------

    def flip_quad(self, e: int) -> Tuple[int, int, int, int]:
        """(p1, q1, p2, q2): the quadrilateral sides around a flippable edge."""
        (t1, s1), (t2, s2) = self.edge_slots[e]
        if t1 == t2:
            raise UnflippableEdgeError(f"edge {e} has both sides on one triangle")
        p1 = self.edge_at(t1, (s1 + 1) % 3)
        q1 = self.edge_at(t1, (s1 + 2) % 3)
        p2 = self.edge_at(t2, (s2 + 1) % 3)
        q2 = self.edge_at(t2, (s2 + 2) % 3)
        return p1, q1, p2, q2

    def flip(self, e: int) -> "Triangulation":
        """Replace the edge by the other diagonal of its quadrilateral.

        The new edge keeps the id.  Weight vectors transform by
        flip_weight below.
        """
        (t1, s1), (t2, s2) = self.edge_slots[e]
        if t1 == t2:
            raise UnflippableEdgeError(f"edge {e} has both sides on one triangle")
        p1 = self.edge_at(t1, (s1 + 1) % 3)
        q1 = self.edge_at(t1, (s1 + 2) % 3)
        p2 = self.edge_at(t2, (s2 + 1) % 3)
        q2 = self.edge_at(t2, (s2 + 2) % 3)
        tris = list(self.triangles)
        tris[t1] = (p2, e, q1)
        tris[t2] = (p1, e, q2)
        return Triangulation(tuple(tris), self.num_edges, self.genus)

    def flip_weight(self, e: int, weights: Sequence[int]) -> Tuple[int, ...]:
        p1, q1, p2, q2 = self.flip_quad(e)
        w = list(weights)
        w[e] = max(w[q1] + w[q2], w[p1] + w[p2]) - w[e]
        assert w[e] >= 0
        return tuple(w)

    # -- comparison up to triangle renumbering ---------------------------

    @cached_property
    def signature(self) -> Tuple[Tuple[int, int, int], ...]:
        def rot_min(tri):
            rots = [tri, tri[1:] + tri[:1], tri[2:] + tri[:2]]
            return min(rots)

        return tuple(sorted(rot_min(t) for t in self.triangles))

    def same_labelled_complex(self, other: "Triangulation") -> bool:
        return self.signature == other.signature

    def isomorphisms_to(self, other: "Triangulation") -> Iterator[Tuple[int, ...]]:
        """Edge relabelings carrying self onto other, as permutation tuples.

        perm[old_edge] = new_edge.  Orientation preserving: triangles map
        with cyclic rotations only.
        """
        n = len(self.triangles)
        if n != len(other.triangles) or self.num_edges != other.num_edges:
            return
        for t0 in range(n):
            for r0 in range(3):
                tri_map: Dict[int, Tuple[int, int]] = {0: (t0, r0)}
                edge_map: Dict[int, int] = {}
                ok = True
                stack = [0]
                seen = {0}
                while stack and ok:
                    t = stack.pop()
                    tt, rr = tri_map[t]
                    for s in range(3):
                        e = self.edge_at(t, s)
                        e2 = other.edge_at(tt, (s + rr) % 3)
                        if edge_map.setdefault(e, e2) != e2:
                            ok = False
                            break
                        t2, s2 = self.partner(t, s)
                        u2, v2 = other.partner(tt, (s + rr) % 3)
                        want = (u2, (v2 - s2) % 3)
                        if t2 in tri_map:
                            if tri_map[t2] != want:
                                ok = False
                                break
                        else:
                            tri_map[t2] = want
                        if t2 not in seen:
                            seen.add(t2)
                            stack.append(t2)
                if ok and len(edge_map) == self.num_edges:
                    perm = tuple(edge_map[e] for e in range(self.num_edges))
                    if len(set(perm)) == self.num_edges:
                        yield perm


def _polygon_letters(genus: int) -> List[Tuple[int, int]]:
    """Polygon boundary word as (edge id, sign) per side, ccw."""
    letters = []
    for k in range(genus):
        a, b = 2 * k, 2 * k + 1
        letters += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return letters


@cache
def surface_triangulation(genus: int) -> Triangulation:
    """Fan triangulation of the 4g-gon, one vertex, 6g-3 edges."""
    if genus < 1:
        raise ValueError("genus must be at least 1")
    n = 4 * genus
    letters = _polygon_letters(genus)
    side_edge = [e for e, _ in letters]

    def gen_class(edge_id: int, sign: int) -> Tuple[int, ...]:
        v = [0] * (2 * genus)
        v[edge_id] = sign
        return tuple(v)

    # diagonal d_i = P0..P_i for 2 <= i <= n-2, fresh ids after the 2g sides
    diag_edge = {i: 2 * genus + (i - 2) for i in range(2, n - 1)}
    diag_edge[1] = side_edge[0]
    diag_edge[n - 1] = side_edge[n - 1]

    tris = []
    for i in range(1, n - 1):
        tris.append((side_edge[i], diag_edge[i + 1], diag_edge[i]))

    num_edges = 2 * genus + (n - 3)

    # reference-direction homology classes
    prefix = [(0,) * (2 * genus)]
    for e, sign in letters:
        last = prefix[-1]
        cur = list(last)
        cur[e] += sign
        prefix.append(tuple(cur))
    classes: List[Tuple[int, ...]] = [None] * num_edges  # type: ignore
    words: List[Tuple[int, ...]] = [None] * num_edges  # type: ignore
    for k in range(2 * genus):
        classes[k] = gen_class(k, 1)
        words[k] = (k + 1,)
    for i in range(2, n - 1):
        # reference slot of d_i is (T_{i-1}, slot 1), direction P_i -> P0
        classes[diag_edge[i]] = tuple(-x for x in prefix[i])
        words[diag_edge[i]] = tuple(-(e + 1) * s for e, s in reversed(letters[:i]))

    names = []
    for k in range(genus):
        names += [f"a{k + 1}", f"b{k + 1}"]
    names += [f"d{i}" for i in range(2, n - 1)]

    tri = Triangulation(
        tuple(tris), num_edges, genus,
        edge_classes=tuple(classes), edge_names=tuple(names),
        edge_words=tuple(words),
    )
    # the reference slot of a side edge must carry the +1 occurrence
    for k in range(2 * genus):
        (t, s), _ = tri.edge_slots[k]
        first_side = side_edge.index(k)
        expect = (first_side - 1, 0) if first_side >= 1 else (0, 2)
        assert (t, s) == expect, (k, (t, s), expect)
    assert len(tri.vertex_corners) == 3 * len(tri.triangles)
    return tri
