"""Simple closed curves as normal coordinates on one-vertex triangulations.

A multicurve is a tuple of edge weights: how many times it crosses each
edge.  Valid weights satisfy, in every triangle, the even-sum and
triangle inequalities that make the corner counts

    n_k = (w_{k+1} + w_{k+2} - w_k) / 2

nonnegative integers.  Since the triangulation has a single vertex, a
curve in the closed surface has many normal representatives that differ
by isotopies across the vertex; those are generated by point pushes
(twist pairs along the two pushoffs of a loop), and canonical_form
picks a preferred one, so marked representatives can be compared as
curves in the closed surface.

Mapping classes act through move lists: edge flips plus a final edge
relabelling that returns to the starting triangulation.  Twist move
lists are derived by derive_twist_moves and checked against homology
transvections and intersection numbers rather than trusted.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .symplectic import pairing, transvection
from .triangulation import Triangulation, UnflippableEdgeError
from .words import free_reduce, invert

Weights = Tuple[int, ...]
Move = Tuple[str, object]  # ("flip", edge) or ("perm", permutation tuple)


class InvalidCurveError(ValueError):
    pass


# -- validity ------------------------------------------------------------


def corner_counts(tri: Triangulation, w: Sequence[int]) -> List[Tuple[int, int, int]]:
    out = []
    for t, (e0, e1, e2) in enumerate(tri.triangles):
        ws = (w[e0], w[e1], w[e2])
        tot = sum(ws)
        if tot % 2:
            raise InvalidCurveError(f"odd crossing sum in triangle {t}")
        ns = tuple((tot - 2 * ws[k]) // 2 for k in range(3))
        if min(ns) < 0:
            raise InvalidCurveError(f"triangle inequality fails in triangle {t}")
        out.append(ns)  # type: ignore
    return out


def validate_weights(tri: Triangulation, w: Sequence[int]) -> None:
    if len(w) != tri.num_edges:
        raise InvalidCurveError("weight vector has wrong length")
    if any(x < 0 for x in w):
        raise InvalidCurveError("negative weight")
    corner_counts(tri, w)


def is_valid(tri: Triangulation, w: Sequence[int]) -> bool:
    try:
        validate_weights(tri, w)
        return True
    except InvalidCurveError:
        return False


def total_weight(w: Sequence[int]) -> int:
    return sum(w)


# -- tracing -------------------------------------------------------------


class Component:
    """One traced component: crossings, per-edge weights, itinerary."""

    __slots__ = ("weights", "signed", "itinerary")

    def __init__(self, weights: Weights, signed: Tuple[int, ...],
                 itinerary: Tuple[Tuple[int, int], ...]):
        self.weights = weights
        self.signed = signed
        # directed crossings (triangle, exit side) in traversal order
        self.itinerary = itinerary


def _arc_partner(ns, ws, s: int, p: int) -> Tuple[int, int]:
    """Within one triangle: other end of the normal arc entering (s, p)."""
    n_next = ns[(s + 1) % 3]
    if p < n_next:
        # arc cutting corner s+1; this is its (k+2)-side, partner on k+1
        s2 = (s + 2) % 3
        return s2, ws[s2] - 1 - p
    # arc cutting corner s+2; this is its (k+1)-side, partner on k+2
    s2 = (s + 1) % 3
    return s2, ws[s] - 1 - p


def trace(tri: Triangulation, w: Sequence[int]) -> List[Component]:
    validate_weights(tri, w)
    ns_all = corner_counts(tri, w)
    visited: Set[Tuple[int, int]] = set()  # (edge, position on reference slot)
    components: List[Component] = []

    def ref_key(t: int, s: int, p: int) -> Tuple[int, int]:
        e = tri.edge_at(t, s)
        if tri.is_reference_slot(t, s):
            return (e, p)
        return (e, w[e] - 1 - p)

    for e0 in range(tri.num_edges):
        for p0 in range(w[e0]):
            if (e0, p0) in visited:
                continue
            (t_start, s_start), _ = tri.edge_slots[e0]
            state = (t_start, s_start, p0)  # just entered t through (s, p)
            comp_w = [0] * tri.num_edges
            comp_s = [0] * tri.num_edges
            itinerary: List[Tuple[int, int]] = []
            while True:
                t, s, p = state
                key = ref_key(t, s, p)
                visited.add(key)
                ws = tuple(w[e] for e in tri.triangles[t])
                s2, p2 = _arc_partner(ns_all[t], ws, s, p)
                e2 = tri.edge_at(t, s2)
                comp_w[e2] += 1
                comp_s[e2] += 1 if tri.is_reference_slot(t, s2) else -1
                itinerary.append((t, s2))
                t3, s3 = tri.partner(t, s2)
                state = (t3, s3, w[e2] - 1 - p2)
                if state == (t_start, s_start, p0):
                    break
            components.append(Component(tuple(comp_w), tuple(comp_s), tuple(itinerary)))
    return components


def component_class(tri: Triangulation, comp: Component) -> Tuple[int, ...]:
    """Integral homology class of a traced component, up to overall sign."""
    assert tri.edge_classes is not None, "homology classes need the base triangulation"
    g = tri.genus
    x = [0] * (2 * g)
    for k in range(g):
        x[2 * k] = comp.signed[2 * k + 1]       # <x, b_k> coefficient of a_k
        x[2 * k + 1] = -comp.signed[2 * k]      # <x, a_k> gives -b_k coefficient
    xt = tuple(x)
    for e in range(tri.num_edges):
        got = pairing(xt, tri.edge_classes[e])
        assert got == comp.signed[e], (
            f"edge {e}: pairing {got} but signed crossing {comp.signed[e]}")
    return xt


def curve_class(tri: Triangulation, w: Sequence[int]) -> Tuple[int, ...]:
    comps = trace(tri, w)
    if len(comps) != 1:
        raise InvalidCurveError(f"expected a connected curve, traced {len(comps)} components")
    return component_class(tri, comps[0])


def is_connected(tri: Triangulation, w: Sequence[int]) -> bool:
    return len(trace(tri, w)) == 1


def is_nonseparating(tri: Triangulation, w: Sequence[int]) -> bool:
    """Odd crossing number with some edge forces nonzero mod-2 class."""
    return any(x % 2 for x in w)


# -- words in pi_1 of the surface ----------------------------------------

_connector_cache: Dict[Tuple, Dict[Tuple[int, int], Tuple[int, ...]]] = {}


def _connector_words(tri: Triangulation) -> Dict[Tuple[int, int], Tuple[int, ...]]:
    """Loop class of the dual step across each directed side.

    Crossing from triangle t through side s is, after dragging to the
    vertex, the boundary walk of the two adjacent triangles between
    their reference corners.  Words are over 1..2g, odd a_k, even b_k.
    """
    key = tri.triangles
    if key in _connector_cache:
        return _connector_cache[key]
    assert tri.edge_words is not None
    out: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    for t in range(len(tri.triangles)):
        for s in range(3):
            t2, s2 = tri.partner(t, s)
            assert t2 != t, "dual step words need a self-gluing free triangulation"
            sides = [(t, (s + 2) % 3), (t2, (s2 + 1) % 3),
                     (t2, (s2 + 2) % 3), (t, (s + 1) % 3)]
            start = {0: 0, 2: 1, 1: 3}[s]
            end = {0: 2, 1: 1, 2: 3}[s2]
            word: List[int] = []
            i = start
            while i != end:
                tt, ss = sides[i]
                e = tri.edge_at(tt, ss)
                piece = tri.edge_words[e]
                if not tri.is_reference_slot(tt, ss):
                    piece = invert(piece)
                word.extend(piece)
                i = (i + 1) % 4
            out[(t, s)] = free_reduce(tuple(word))
    _connector_cache[key] = out
    return out


def itinerary_word(tri: Triangulation, comp: Component) -> Tuple[int, ...]:
    """Free homotopy class of a component as a word over 1..2g."""
    conn = _connector_words(tri)
    word: List[int] = []
    for step in comp.itinerary:
        word.extend(conn[step])
    return free_reduce(tuple(word))


# -- closed-surface canonical form ----------------------------------------


def vertex_link(tri: Triangulation) -> Weights:
    return tuple([2] * tri.num_edges)


def point_push_moves(tri: Triangulation) -> List[List[Move]]:
    """Move lists generating isotopies across the vertex.

    Pushing the vertex around a loop is the twist along one pushoff of
    the loop composed with the inverse twist along the other; any such
    pair acts trivially on curves in the closed surface because the two
    pushoffs are isotopic there.  The 2g generator loops already
    generate the whole push group; the remaining edge loops with
    nonseparating pushoffs are included as well because they flatten
    the weight landscape that canonical_form descends.
    """
    key = tri.triangles
    if key in _push_cache:
        return _push_cache[key]
    pairs = [(pushoff_edge(tri, e, 0), pushoff_edge(tri, e, 1))
             for e in range(tri.num_edges)]
    out: List[List[Move]] = []
    if any(left != right for left, right in pairs):
        probes, pair_probes = standard_probes(tri)
        for left, right in pairs:
            if left == right or not is_nonseparating(tri, left):
                continue
            tw_l = derive_twist_moves(tri, left, probes, pair_probes)
            tw_r = derive_twist_moves(tri, right, probes, pair_probes)
            push = list(tw_l) + invert_moves(tw_r)
            out.append(push)
            out.append(invert_moves(push))
    _push_cache[key] = out
    return out


_push_cache: Dict[Tuple, List[List[Move]]] = {}
_canonical_cache: Dict[Tuple, Dict[Weights, Weights]] = {}


def canonical_form(tri: Triangulation, w: Sequence[int],
                   depth: int = 3, budget: int = 50000) -> Weights:
    """Preferred normal representative of the curve in the closed surface.

    Normal vectors classify curves in the surface punctured at the
    vertex; representatives of one closed isotopy class form a single
    orbit of the point pushes.  Descend by the lightest result found
    within a bounded number of pushes until no reduction remains, then
    return the lex smallest vector of the equal-weight stratum there.
    Representative independence is what the scramble and relator tests
    exercise.
    """
    v = tuple(w)
    validate_weights(tri, v)
    pushes = point_push_moves(tri)
    if not pushes:
        return v
    cache = _canonical_cache.setdefault(tri.triangles, {})
    if v in cache:
        return cache[v]
    arg = v

    def neighbours(x: Weights) -> Iterable[Weights]:
        for mv in pushes:
            yield apply_moves(tri, x, mv)

    def reduce_step(x: Weights) -> Optional[Weights]:
        # best strictly lighter vector within depth pushes; hump height
        # scales with weight, hump width does not, so the lookahead is
        # counted in pushes rather than weight
        layer = {x}
        seen = {x}
        for _ in range(depth):
            nxt: Set[Weights] = set()
            best: Optional[Weights] = None
            for y in layer:
                for z in neighbours(y):
                    if z in seen:
                        continue
                    seen.add(z)
                    nxt.add(z)
                    if sum(z) < sum(x) and (best is None or (sum(z), z) < (sum(best), best)):
                        best = z
            if best is not None:
                return best
            layer = nxt
            if len(seen) > budget:
                raise RuntimeError("canonical form budget exceeded")
        return None

    while True:
        nv = reduce_step(v)
        if nv is None:
            break
        v = nv

    # lex smallest vector of the minimal stratum around the minimum
    stratum = {v}
    frontier = [v]
    while frontier:
        x = frontier.pop()
        for y in neighbours(x):
            if sum(y) == sum(v) and y not in stratum:
                stratum.add(y)
                frontier.append(y)
                if len(stratum) > budget:
                    raise RuntimeError("canonical form budget exceeded")
    out = min(stratum)
    cache[arg] = out
    for x in stratum:
        cache[x] = out
    return out


def closed_equal(tri: Triangulation, w1: Sequence[int], w2: Sequence[int]) -> bool:
    return canonical_form(tri, w1) == canonical_form(tri, w2)


def is_trivial_curve(tri: Triangulation, w: Sequence[int]) -> bool:
    """Bounds a disk in the closed surface (vertex-parallel)."""
    return canonical_form(tri, w) == canonical_form(tri, vertex_link(tri))


# -- pushoff constructions ------------------------------------------------


def _germ_interval(tri: Triangulation, m_from: int, m_to: int, rot: int) -> List[int]:
    """Open germ interval from m_from to m_to walking in direction rot."""
    D = len(tri.germ_edges)
    out = []
    m = (m_from + rot) % D
    while m != m_to:
        out.append(m)
        m = (m + rot) % D
    return out


def _directed_end_germs(tri: Triangulation, e: int, direction: int) -> Tuple[int, int]:
    """(initial germ, terminal germ) of an edge run in a given direction."""
    (t, s), _ = tri.edge_slots[e]
    hi = tri.germ_of_slot_end(t, s, True)
    lo = tri.germ_of_slot_end(t, s, False)
    return (lo, hi) if direction > 0 else (hi, lo)


def pushoff_edge(tri: Triangulation, e: int, side: int) -> Weights:
    """Curve parallel to an edge loop, rounded off past the vertex."""
    init, term = _directed_end_germs(tri, e, 1)
    rot = 1 if side == 0 else -1
    w = [0] * tri.num_edges
    for m in _germ_interval(tri, term, init, rot):
        w[tri.germ_edges[m]] += 1
    out = tuple(w)
    validate_weights(tri, out)
    return out


def pushoff_path(tri: Triangulation, path: Sequence[int],
                 rotations: Sequence[int]) -> Weights:
    """Curve parallel to a closed edge path, with a vertex detour between
    consecutive edges.

    path lists signed edges (positive = reference direction, edges are
    1-based in the sign encoding), rotations picks the detour direction
    at each of the len(path) passages.  Wrong rotation patterns usually
    fail validation or trace to the wrong curve; callers search them.
    """
    assert len(path) == len(rotations) and path
    w = [0] * tri.num_edges
    dirs = []
    for letter in path:
        e = abs(letter) - 1
        dirs.append((e, 1 if letter > 0 else -1))
    for i in range(len(dirs)):
        e1, d1 = dirs[i]
        e2, d2 = dirs[(i + 1) % len(dirs)]
        _, arrive = _directed_end_germs(tri, e1, d1)
        depart, _ = _directed_end_germs(tri, e2, d2)
        if arrive == depart:
            raise InvalidCurveError("path backtracks along an edge")
        for m in _germ_interval(tri, arrive, depart, rotations[i]):
            w[tri.germ_edges[m]] += 1
    out = tuple(w)
    validate_weights(tri, out)
    return out


def _pair_probe(tri: Triangulation, e1: int, e2: int) -> Weights:
    for s2 in (1, -1):
        path = [e1 + 1, s2 * (e2 + 1)]
        for r1 in (1, -1):
            for r2 in (1, -1):
                try:
                    w = pushoff_path(tri, path, (r1, r2))
                except InvalidCurveError:
                    continue
                if not is_connected(tri, w):
                    continue
                x = curve_class(tri, w)
                if x[e1] != 0 and x[e2] != 0:
                    return w
    raise RuntimeError("no valid joint pushoff found")


def standard_probes(tri: Triangulation) -> Tuple[List[Weights], List[Weights]]:
    """Probe curves for twist certification: one pushoff per generator
    loop (their classes form a basis) plus a joint pushoff for each
    consecutive pair of loops (pins the relative signs)."""
    probes = [pushoff_edge(tri, e, 0) for e in range(2 * tri.genus)]
    pair_probes = [_pair_probe(tri, e, e + 1) for e in range(2 * tri.genus - 1)]
    return probes, pair_probes


# -- mapping class moves --------------------------------------------------


def relabel(tri: Triangulation, perm: Sequence[int]) -> Triangulation:
    tris = tuple(tuple(perm[e] for e in t) for t in tri.triangles)
    return Triangulation(tris, tri.num_edges, tri.genus)


def permute_weights(w: Sequence[int], perm: Sequence[int]) -> Weights:
    out = [0] * len(w)
    for e, x in enumerate(w):
        out[perm[e]] = x
    return tuple(out)


def apply_moves(tri: Triangulation, w: Sequence[int], moves: Sequence[Move]) -> Weights:
    state = tri
    cur = tuple(w)
    for kind, arg in moves:
        if kind == "flip":
            cur = state.flip_weight(arg, cur)  # type: ignore[arg-type]
            state = state.flip(arg)  # type: ignore[arg-type]
        elif kind == "perm":
            cur = permute_weights(cur, arg)  # type: ignore[arg-type]
            state = relabel(state, arg)  # type: ignore[arg-type]
        else:
            raise ValueError(f"unknown move kind {kind!r}")
    if not state.same_labelled_complex(tri):
        raise ValueError("move list does not return to the starting triangulation")
    return cur


def invert_moves(moves: Sequence[Move]) -> List[Move]:
    out: List[Move] = []
    for kind, arg in reversed(moves):
        if kind == "flip":
            out.append((kind, arg))
        else:
            perm: Sequence[int] = arg  # type: ignore[assignment]
            inv = [0] * len(perm)
            for i, j in enumerate(perm):
                inv[j] = i
            out.append(("perm", tuple(inv)))
    return out


def push_through_flips(tri: Triangulation, w: Sequence[int],
                       flips: Sequence[int]) -> Tuple[Triangulation, Weights]:
    state = tri
    cur = tuple(w)
    for e in flips:
        cur = state.flip_weight(e, cur)
        state = state.flip(e)
    return state, cur


# -- shortening -----------------------------------------------------------


def shorten(tri: Triangulation, w: Sequence[int],
            plateau_budget: int = 20000) -> Tuple[List[int], Triangulation, Weights]:
    """Flip until the curve crosses just two edges, once each.

    Only nonseparating curves get this short; greedy strictly reducing
    flips are tried first, with a search through weight-neutral flips
    when greed stalls.
    """
    if not is_nonseparating(tri, w):
        raise InvalidCurveError("shorten expects a nonseparating curve")
    state = tri
    cur = tuple(w)
    flips: List[int] = []

    def reducing_flip(st: Triangulation, v: Weights) -> Optional[int]:
        for e in range(st.num_edges):
            if v[e] == 0:
                continue
            try:
                nv = st.flip_weight(e, v)
            except UnflippableEdgeError:
                continue
            if sum(nv) < sum(v):
                return e
        return None

    while sum(cur) > 2:
        e = reducing_flip(state, cur)
        if e is not None:
            cur = state.flip_weight(e, cur)
            state = state.flip(e)
            flips.append(e)
            continue
        # plateau: breadth-first through weight-neutral flips
        seen = {(state.triangles, cur)}
        frontier = [(state, cur, flips)]
        found = None
        while frontier and found is None:
            st, v, path = frontier.pop(0)
            for e in range(st.num_edges):
                if v[e] == 0:
                    continue
                try:
                    nv = st.flip_weight(e, v)
                except UnflippableEdgeError:
                    continue
                if sum(nv) > sum(v):
                    continue
                nst = st.flip(e)
                key = (nst.triangles, nv)
                if key in seen:
                    continue
                seen.add(key)
                npath = path + [e]
                if sum(nv) < sum(v) or reducing_flip(nst, nv) is not None:
                    found = (nst, nv, npath)
                    break
                frontier.append((nst, nv, npath))
                if len(seen) > plateau_budget:
                    raise RuntimeError("shorten plateau budget exceeded")
        if found is None:
            raise RuntimeError("curve does not shorten to two crossings")
        state, cur, flips = found

    support = [e for e in range(state.num_edges) if cur[e]]
    assert len(support) == 2 and all(cur[e] == 1 for e in support), (cur, support)
    return flips, state, cur


# -- intersection numbers -------------------------------------------------


def _short_corners(state: Triangulation, k: Sequence[int]):
    """The two corner arcs of a two-crossing curve.

    Returns per corner: (triangle, corner, ((edge, high_end), (edge, high_end)))
    where high_end says whether the corner sits at the position w-1 end
    of that side in reference coordinates.
    """
    ns_all = corner_counts(state, k)
    corners = []
    for t, ns in enumerate(ns_all):
        for kk in range(3):
            if ns[kk]:
                assert ns[kk] == 1
                s_hi = (kk + 1) % 3  # corner at the high end of this side
                s_lo = (kk + 2) % 3  # corner at the low end of this side
                sides = []
                for s, high_local in ((s_hi, True), (s_lo, False)):
                    e = state.edge_at(t, s)
                    if state.is_reference_slot(t, s):
                        sides.append((e, high_local))
                    else:
                        sides.append((e, not high_local))
                corners.append((t, kk, tuple(sides)))
    assert len(corners) == 2, corners
    return corners


def intersection_with_short(state: Triangulation, a: Sequence[int],
                            k: Sequence[int]) -> int:
    """Geometric intersection number of a with a two-crossing curve k.

    The two arcs of k cut off two corners; inserting k's crossing into a
    gap between the crossings of a on each of its two edges determines
    how many arcs of a each corner arc must cross, and the true count is
    the minimum over gaps.
    """
    validate_weights(state, a)
    support = [e for e in range(state.num_edges) if k[e]]
    assert len(support) == 2 and all(k[e] == 1 for e in support), "k must cross two edges once"
    p, q = support
    ns_all = corner_counts(state, a)
    corners = _short_corners(state, k)

    def corner_term(corner, gap_p: int, gap_q: int) -> int:
        t, kk, sides = corner
        n_corner = ns_all[t][kk]
        depths = {}
        for e, high in sides:
            gap = gap_p if e == p else gap_q
            depths[e] = (a[e] - gap) if high else gap
        dp, dq = depths[p], depths[q]
        return (abs(min(dp, n_corner) - min(dq, n_corner))
                + max(0, dp - n_corner) + max(0, dq - n_corner))

    best = None
    for gap_p in range(a[p] + 1):
        for gap_q in range(a[q] + 1):
            tot = sum(corner_term(c, gap_p, gap_q) for c in corners)
            if best is None or tot < best:
                best = tot
    assert best is not None
    return best


def geometric_intersection(tri: Triangulation, a: Sequence[int],
                           b: Sequence[int]) -> int:
    """Geometric intersection number of two curves.

    One of the two must be nonseparating: it is flipped short and the
    other transported along.  Both-separating pairs are not needed by
    anything here and raise.
    """
    validate_weights(tri, a)
    validate_weights(tri, b)
    if is_nonseparating(tri, b):
        flips, state, short = shorten(tri, b)
        _, a2 = push_through_flips(tri, a, flips)
        return intersection_with_short(state, a2, short)
    if is_nonseparating(tri, a):
        return geometric_intersection(tri, b, a)
    raise NotImplementedError("intersection of two separating curves")


def punctured_disjoint(tri: Triangulation, a: Sequence[int], b: Sequence[int]) -> bool:
    """Can a and b be realized disjointly without crossing the vertex?

    The sum of two weight vectors is the normal multicurve obtained by
    resolving the union; it splits back into {a, b} exactly when the two
    are disjoint.
    """
    s = tuple(x + y for x, y in zip(a, b))
    if not is_valid(tri, s):
        return False
    comps = sorted(c.weights for c in trace(tri, s))
    return comps == sorted([tuple(a), tuple(b)])


def closed_disjoint(tri: Triangulation, a: Sequence[int], b: Sequence[int]) -> bool:
    """Disjointness witness for curves in the closed surface.

    Sound but not complete: a True answer always has a normal witness,
    a False answer just means no witness was found among the marked
    representatives tried.
    """
    if punctured_disjoint(tri, a, b):
        return True
    ca, cb = canonical_form(tri, a), canonical_form(tri, b)
    if ca == cb:
        return True
    return punctured_disjoint(tri, ca, cb)


# -- twist move derivation ------------------------------------------------


def _neighbour_edges(state: Triangulation, support: Iterable[int]) -> List[int]:
    tris = set()
    sup = set(support)
    for t, tr in enumerate(state.triangles):
        if sup & set(tr):
            tris.add(t)
    out = set()
    for t in tris:
        out.update(state.triangles[t])
    return sorted(out)


def derive_twist_moves(tri: Triangulation, k_w: Sequence[int],
                       probes: Sequence[Sequence[int]],
                       pair_probes: Sequence[Sequence[int]] = (),
                       max_flips: int = 4) -> List[Move]:
    """Move list acting on curves as the right-handed twist along k_w.

    The curve is flipped short, candidate local flip sequences plus a
    relabelling back are searched near its support, and each candidate
    is accepted only if on every probe it reproduces the homology
    transvection along [k] and preserves intersection with k.  Probe
    classes must span homology; pair_probes pin relative signs.
    """
    k_w = tuple(k_w)
    kcls = curve_class(tri, k_w)
    target = transvection(kcls)
    flips, S, k_short = shorten(tri, k_w)
    back = list(reversed(flips))

    def unsigned(v: Tuple[int, ...]) -> Tuple[int, ...]:
        neg = tuple(-x for x in v)
        return min(v, neg)

    def mat_apply(m, v):
        return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(v)))

    def certify(full: List[Move]) -> bool:
        if apply_moves(tri, k_w, full) != k_w:
            return False
        for pw in list(probes) + list(pair_probes):
            img = apply_moves(tri, pw, full)
            want = unsigned(mat_apply(target, curve_class(tri, pw)))
            if unsigned(curve_class(tri, img)) != want:
                return False
            if geometric_intersection(tri, img, k_w) != geometric_intersection(tri, pw, k_w):
                return False
        return True

    prefix: List[Move] = [("flip", e) for e in flips]
    suffix: List[Move] = [("flip", e) for e in back]

    # breadth-first over short local flip sequences
    frontier: List[Tuple[Triangulation, Weights, List[int]]] = [(S, k_short, [])]
    seen = {(S.triangles, k_short)}
    while frontier:
        st, kv, path = frontier.pop(0)
        if path:
            for perm in st.isomorphisms_to(S):
                local: List[Move] = [("flip", e) for e in path] + [("perm", perm)]
                full = prefix + local + suffix
                if certify(full):
                    return full
        if len(path) >= max_flips:
            continue
        for e in _neighbour_edges(st, [i for i in range(st.num_edges) if kv[i]]):
            try:
                nv = st.flip_weight(e, kv)
                nst = st.flip(e)
            except UnflippableEdgeError:
                continue
            key = (nst.triangles, nv)
            if key in seen:
                continue
            seen.add(key)
            frontier.append((nst, nv, path + [e]))
    raise RuntimeError("no certified twist realization found")
