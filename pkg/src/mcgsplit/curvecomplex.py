"""Curve-complex vertices and the twist action in normal coordinates.

A vertex is an essential simple closed curve on the genus-g surface,
stored as nonnegative crossing weights against the fixed one-vertex
triangulation.  Generator twists act through certified move lists; a
word acts with its rightmost letter first, matching the matrix order of
the symplectic representation, so homology classes of images can always
be cross-checked against chi.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import curves as cv
from .curves import InvalidCurveError, Move, Weights
from .presentation import load_presentation
from .triangulation import Triangulation, surface_triangulation
from .words import Word


def validate(tri: Triangulation, weights: Sequence[int]) -> Weights:
    """Check the full vertex conditions, not just normal-coordinate validity.

    Raises InvalidCurveError with a reason: wrong length, negative entry,
    "empty", parity or triangle inequality violations, "<n> components"
    for multicurves, or "peripheral curve" for the vertex link.
    """
    w = tuple(int(x) for x in weights)
    if len(w) != tri.num_edges:
        raise InvalidCurveError("weight vector has wrong length")
    if any(x < 0 for x in w):
        raise InvalidCurveError("negative weight")
    if not any(w):
        raise InvalidCurveError("empty")
    for t, sides in enumerate(tri.triangles):
        ws = tuple(w[e] for e in sides)
        if sum(ws) % 2:
            raise InvalidCurveError(f"parity violation in triangle {t}")
        if 2 * max(ws) > sum(ws):
            raise InvalidCurveError(f"triangle inequality violation in triangle {t}")
    comps = cv.trace(tri, w)
    if len(comps) != 1:
        raise InvalidCurveError(f"{len(comps)} components")
    if cv.is_trivial_curve(tri, w):
        raise InvalidCurveError("peripheral curve")
    return w


def flip(tri: Triangulation, e: int, weights: Sequence[int]) -> Tuple[Triangulation, Weights]:
    """One edge flip: the updated triangulation state and curve weights."""
    return tri.flip(e), tri.flip_weight(e, weights)


@lru_cache(maxsize=None)
def _generator_twists(genus: int) -> Tuple[Tuple[Move, ...], ...]:
    table = load_presentation(genus)
    tri = surface_triangulation(genus)
    probes, pair_probes = cv.standard_probes(tri)
    out = []
    for w in table.generators.curves:
        out.append(tuple(cv.derive_twist_moves(tri, w, probes, pair_probes)))
    return tuple(out)


def generator_moves(genus: int, letter: int) -> List[Move]:
    """Move list of one signed twist generator: +k is b_k, -k its inverse."""
    if letter == 0:
        raise ValueError("letter 0 is not a generator")
    twists = _generator_twists(genus)
    if not 1 <= abs(letter) <= len(twists):
        raise ValueError(f"generator index {abs(letter)} out of range 1..{len(twists)}")
    moves = list(twists[abs(letter) - 1])
    return moves if letter > 0 else cv.invert_moves(moves)


def apply_generator(genus: int, weights: Sequence[int], letter: int) -> Weights:
    tri = surface_triangulation(genus)
    return cv.apply_moves(tri, weights, generator_moves(genus, letter))


def word_action(genus: int, word: Word, weights: Sequence[int]) -> Weights:
    """Image of a curve under a twist word.

    The rightmost letter acts first: class(word_action(w, x)) equals
    chi(w) applied to class(x), up to the usual sign ambiguity.
    """
    tri = surface_triangulation(genus)
    cur = tuple(weights)
    for letter in reversed(word):
        cur = cv.apply_moves(tri, cur, generator_moves(genus, letter))
    return cur


def generator_curve(genus: int, k: int) -> Weights:
    return load_presentation(genus).generators.curves[k - 1]


def random_curves(genus: int, count: int, seed: int = 0,
                  max_weight: int = 30, max_word: int = 6) -> List[Weights]:
    """Deterministic sample of valid curve vectors: random short twist
    words applied to the generator curves, filtered by total weight."""
    tri = surface_triangulation(genus)
    rng = random.Random(seed)
    table = load_presentation(genus)
    n = table.num_generators
    base = list(table.generators.curves)
    out: List[Weights] = []
    seen = set()
    attempts = 0
    length = 2
    while len(out) < count:
        attempts += 1
        if attempts % (count * 4) == 0 and length < max_word:
            length += 1
        w = rng.choice(base)
        for _ in range(rng.randint(1, length)):
            letter = rng.choice([s * k for k in range(1, n + 1) for s in (1, -1)])
            w = apply_generator(genus, w, letter)
        if sum(w) <= max_weight and w not in seen:
            seen.add(w)
            out.append(w)
    return out


# -- bounded neighbor enumeration and breadth-first search -----------------


@lru_cache(maxsize=None)
def enumerate_vertices(genus: int, max_edge_weight: int) -> Tuple[Weights, ...]:
    """All single-curve essential vertices with every weight ≤ the bound.

    Exhaustive within the budget: depth-first over edges with the parity
    and triangle conditions enforced on every completed triangle.
    """
    tri = surface_triangulation(genus)
    n = tri.num_edges
    # triangles whose last edge in scan order is e
    closing: List[List[Tuple[int, int, int]]] = [[] for _ in range(n)]
    for sides in tri.triangles:
        closing[max(sides)].append(sides)
    out: List[Weights] = []
    w = [0] * n

    def rec(e: int):
        if e == n:
            vec = tuple(w)
            if any(vec) and cv.is_connected(tri, vec):
                out.append(vec)
            return
        for x in range(max_edge_weight + 1):
            w[e] = x
            ok = True
            for sides in closing[e]:
                ws = tuple(w[s] for s in sides)
                if sum(ws) % 2 or 2 * max(ws) > sum(ws):
                    ok = False
                    break
            if ok:
                rec(e + 1)
        w[e] = 0

    rec(0)
    link = cv.canonical_form(tri, cv.vertex_link(tri))
    return tuple(v for v in out if cv.canonical_form(tri, v) != link)


def _adjacent(tri: Triangulation, a: Weights, b: Weights) -> bool:
    if cv.is_nonseparating(tri, a) or cv.is_nonseparating(tri, b):
        return cv.geometric_intersection(tri, a, b) == 0
    # two separating curves: fall back to the sound disjointness witness
    return cv.closed_disjoint(tri, a, b)


def bfs_distance(genus: int, a: Sequence[int], b: Sequence[int],
                 radius: int = 2, neighbor_budget: int = 2,
                 ) -> Optional[Tuple[int, List[Weights]]]:
    """Certified upper bound on curve-complex distance, or None.

    Breadth-first from a through the exhaustive budget-bounded vertex
    list; a returned path has consecutive intersection number zero and
    length ≤ radius.  None only means no path was found within the
    budgets, never a lower bound.
    """
    tri = surface_triangulation(genus)
    a = validate(tri, a)
    b = validate(tri, b)
    if cv.closed_equal(tri, a, b):
        return 0, [a]
    if radius == 0:
        return None
    if _adjacent(tri, a, b):
        return 1, [a, b]
    candidates = enumerate_vertices(genus, neighbor_budget)
    seen = {cv.canonical_form(tri, a)}
    frontier: List[Tuple[Weights, List[Weights]]] = [(a, [a])]
    for depth in range(2, radius + 1):
        nxt: List[Tuple[Weights, List[Weights]]] = []
        for node, path in frontier:
            for cand in candidates:
                key = cv.canonical_form(tri, cand)
                if key in seen or not _adjacent(tri, node, cand):
                    continue
                seen.add(key)
                if _adjacent(tri, cand, b):
                    return depth, path + [cand, b]
                nxt.append((cand, path + [cand]))
        frontier = nxt
        if not frontier:
            return None
    return None


def verify_path(genus: int, path: Sequence[Sequence[int]]) -> bool:
    tri = surface_triangulation(genus)
    if len(path) == 1:
        return True
    return all(
        _adjacent(tri, tuple(path[i]), tuple(path[i + 1]))
        for i in range(len(path) - 1)
    )


def path_to_dot(path: Sequence[Sequence[int]], name: str = "curve_path") -> str:
    """DOT digraph of a curve-complex path for quick inspection."""
    lines = [f"graph {name} {{"]
    for i, w in enumerate(path):
        label = ",".join(str(x) for x in w)
        lines.append(f'  n{i} [label="{label}"];')
    for i in range(len(path) - 1):
        lines.append(f"  n{i} -- n{i + 1};")
    lines.append("}")
    return "\n".join(lines)
