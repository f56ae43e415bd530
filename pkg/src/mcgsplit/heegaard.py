"""Heegaard splittings glued from twist words: disc sets, distance bounds,
stabilization, and double-coset invariants in finite quotients.

A splitting is the closed 3-manifold built from two genus-g handlebodies
glued along the surface by a word in the twist generators.  The X-side
handlebody is the one whose meridian discs are bounded by the shipped
cut system; the Y-side disc set is the image of the X-side one under the
gluing word, so any curve found in both certifies distance 0 and any
disjoint cross pair certifies distance at most 1.  Lower bounds are out
of scope: reports only ever carry one-sided certificates.

A word is accepted as a handlebody map when every cut curve's image is
again a cut curve or disjoint from the whole cut system.  Disjointness
is sound because a curve in the cut system's complement lies on the
boundary sphere of the cut-open handlebody and pushes into the ball,
so it bounds a disc; the certificate is checked when data loads.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import curvecomplex as cc
from . import curves as cv
from .presentation import DATA_DIR, load_presentation
from .symplectic import (
    AbelianGroupInvariants,
    chi,
    homology_of_splitting,
    identity_matrix,
    is_torelli,
    reduce_mod_p,
    spans_lagrangian_summand,
)
from .triangulation import surface_triangulation
from .words import Word, free_reduce, invert

Weights = Tuple[int, ...]


# -- cut systems and handlebody generator words --------------------------------


@dataclass(frozen=True)
class CutSystem:
    """g disjoint nonseparating curves bounding the handlebody's discs."""

    genus: int
    curves: Tuple[Weights, ...]
    transports: Tuple[Tuple[Word, int], ...]

    def __post_init__(self):
        tri = surface_triangulation(self.genus)
        assert len(self.curves) == self.genus
        classes = []
        for i, a in enumerate(self.curves):
            assert cv.is_nonseparating(tri, a)
            classes.append(cv.curve_class(tri, a))
            for b in self.curves[i + 1:]:
                assert cv.geometric_intersection(tri, a, b) == 0
        assert spans_lagrangian_summand(classes, self.genus)

    def meridian_twist_words(self) -> Tuple[Word, ...]:
        out = []
        for w, base in self.transports:
            out.append(free_reduce(w + (base,) + invert(w)))
        return tuple(out)


@lru_cache(maxsize=None)
def cut_system(genus: int) -> CutSystem:
    path = DATA_DIR / f"cut_system_g{genus}.json"
    if not path.exists():
        raise ValueError("cut system data not bundled")
    data = json.loads(path.read_text())
    table = load_presentation(genus)
    transports = tuple((tuple(e["transport"]), e["base"]) for e in data)
    curves = tuple(
        cc.word_action(genus, w, table.generators.curves[base - 1])
        for w, base in transports)
    return CutSystem(genus=genus, curves=curves, transports=transports)


def preserves_handlebody(genus: int, word: Word) -> bool:
    """The fix-or-disjoint certificate on the cut system."""
    tri = surface_triangulation(genus)
    cut = cut_system(genus)
    for c in cut.curves:
        img = cc.word_action(genus, word, c)
        if any(cv.closed_equal(tri, img, x) for x in cut.curves):
            continue
        if all(cv.geometric_intersection(tri, img, x) == 0
               for x in cut.curves):
            continue
        return False
    return True


def _knob_words(genus: int) -> List[Word]:
    # rotation of one handle by pi: the genus-1 half-chain cubed, built
    # from the handle's meridian twist word and its dual chain letter
    cut = cut_system(genus)
    twists = cut.meridian_twist_words()
    duals = _dual_letters(genus)
    out = []
    for t, y in zip(twists, duals):
        out.append(free_reduce((t + (y,)) * 3))
    return out


def _dual_letters(genus: int) -> List[int]:
    """Chain letter crossing each cut curve exactly once."""
    tri = surface_triangulation(genus)
    cut = cut_system(genus)
    table = load_presentation(genus)
    out = []
    for c in cut.curves:
        hits = [k + 1 for k, w in enumerate(table.generators.curves)
                if cv.geometric_intersection(tri, c, w) == 1]
        assert hits, "cut curve crosses no generator once"
        out.append(hits[0])
    return out


def separating_meridian_words(genus: int) -> Tuple[Word, ...]:
    """Twists along the per-handle separating waist curves, which bound
    discs and act trivially on homology.  The knob word squared."""
    return tuple(free_reduce(k * 2) for k in _knob_words(genus))


@lru_cache(maxsize=None)
def handlebody_generators(genus: int) -> Tuple[Word, ...]:
    """Certified generator words for the handlebody subgroup.

    Meridian twists along the cut curves, twists along derived band-sum
    meridians, knob rotations, per-handle separating twists, handle
    slides from the shipped data, and at genus 2 the hyperelliptic
    palindrome.  Every word passes the fix-or-disjoint certificate;
    known to generate a subgroup of the handlebody group, completeness
    is not claimed.
    """
    if genus not in (2, 3, 4):
        raise ValueError("generator data not bundled")
    cut = cut_system(genus)
    twists = cut.meridian_twist_words()
    words: List[Word] = list(twists)
    for s in _slide_data(genus):
        slide = tuple(s["word"])
        words.append(slide)
        # twist along the band-sum meridian the slide produces
        inner = twists[s["moves"] - 1]
        words.append(free_reduce(slide + inner + invert(slide)))
    words.extend(_knob_words(genus))
    words.extend(separating_meridian_words(genus))
    if genus == 2:
        half = (1, 2, 3, 4, 5)
        words.append(half + tuple(reversed(half)))
    out = tuple(dict.fromkeys(free_reduce(w) for w in words))
    for w in out:
        assert preserves_handlebody(genus, w), w
    return out


@lru_cache(maxsize=None)
def _slide_data(genus: int) -> List[dict]:
    path = DATA_DIR / f"handlebody_g{genus}.json"
    if not path.exists():
        return []
    return json.loads(path.read_text())["slides"]


def _slide_words(genus: int) -> Tuple[Word, ...]:
    return tuple(tuple(s["word"]) for s in _slide_data(genus))


def torelli_handlebody_generators(genus: int) -> Tuple[Word, ...]:
    """Handlebody generator words acting trivially on homology.

    A sub-generating set of the Torelli-handlebody intersection; its
    completeness is unknown, so invariants built on it are lower
    approximations.
    """
    ident = identity_matrix(2 * genus)
    return tuple(w for w in handlebody_generators(genus)
                 if chi(w, genus) == ident)


# -- disc sets ------------------------------------------------------------------


@dataclass(frozen=True)
class DiscBudget:
    word_length: int = 2
    max_weight: int = 80
    max_vertices: int = 200

    def to_json(self) -> dict:
        return {"word_length": self.word_length,
                "max_weight": self.max_weight,
                "max_vertices": self.max_vertices}


@dataclass(frozen=True)
class DiscVertex:
    curve: Weights
    provenance: Word
    origin: int


@dataclass(frozen=True)
class DiscSet:
    side: str
    genus: int
    vertices: Tuple[DiscVertex, ...]
    budget: DiscBudget

    def curves(self) -> Tuple[Weights, ...]:
        return tuple(v.curve for v in self.vertices)


def enumerate_disc_set(cut: CutSystem, budget: DiscBudget,
                       side: str = "X") -> DiscSet:
    """Orbit of the cut curves under handlebody generator words.

    Breadth-first in the number of generator words applied, deduplicated
    by closed-curve canonical form, deterministic, monotone in budget.
    """
    genus = cut.genus
    tri = surface_triangulation(genus)
    gens = handlebody_generators(genus)
    verts: List[DiscVertex] = []
    seen = set()
    frontier: List[DiscVertex] = []
    for idx, c in enumerate(cut.curves):
        v = DiscVertex(c, (), idx)
        verts.append(v)
        frontier.append(v)
        seen.add(cv.canonical_form(tri, c))
    for _ in range(budget.word_length):
        nxt: List[DiscVertex] = []
        for v in frontier:
            for g in gens:
                img = cc.word_action(genus, g, v.curve)
                if sum(img) > budget.max_weight:
                    continue
                key = cv.canonical_form(tri, img)
                if key in seen:
                    continue
                if len(verts) >= budget.max_vertices:
                    break
                seen.add(key)
                nv = DiscVertex(img, free_reduce(g + v.provenance), v.origin)
                verts.append(nv)
                nxt.append(nv)
        frontier = nxt
        if not frontier:
            break
    return DiscSet(side=side, genus=genus, vertices=tuple(verts),
                   budget=budget)


def verify_disc_provenance(disc: DiscSet, gluing: Word = ()) -> bool:
    """Re-derive every vertex from its provenance word and origin curve."""
    cut = cut_system(disc.genus)
    for v in disc.vertices:
        start = cut.curves[v.origin]
        word = free_reduce(tuple(gluing) + v.provenance)
        if cc.word_action(disc.genus, word, start) != v.curve:
            return False
    return True


# -- splittings, distance, classification ----------------------------------------


@dataclass(frozen=True)
class SplittingDescription:
    genus: int
    gluing: Word

    def __post_init__(self):
        n = load_presentation(self.genus).num_generators
        assert all(1 <= abs(x) <= n for x in self.gluing), \
            "gluing word uses letters outside the generator set"

    def homology(self) -> AbelianGroupInvariants:
        return homology_of_splitting(self.gluing, self.genus)


@dataclass
class DistanceReport:
    upper_bound: Optional[int]
    witness_path: Optional[List[Weights]]
    flags: Dict[str, bool]
    budgets: Dict[str, object]

    def to_json(self) -> dict:
        return {
            "upper_bound": self.upper_bound,
            "witness_path": (None if self.witness_path is None
                             else [list(w) for w in self.witness_path]),
            "flags": dict(self.flags),
            "budgets": dict(self.budgets),
        }

    def witness_dot(self) -> Optional[str]:
        if self.witness_path is None:
            return None
        return cc.path_to_dot(self.witness_path, name="witness")


def _flags(upper_bound: Optional[int]) -> Dict[str, bool]:
    d = upper_bound
    return {
        "reducible_certified": d == 0,
        "weakly_reducible_certified": d is not None and d <= 1,
        "strongly_irreducible_possible": d is None or d > 1,
        "hyperbolic_candidate": False,
    }


def classify(report: DistanceReport) -> Dict[str, bool]:
    """Certificate flags from a distance report's upper bound.

    d = 0 certifies reducible (and everything weaker), d <= 1 certifies
    weakly reducible; with no certificate the splitting may be strongly
    irreducible.  Hyperbolicity needs a lower bound >= 3, which nothing
    here produces, so that flag is never set.
    """
    return _flags(report.upper_bound)


def _cross_adjacent(tri, a: Weights, b: Weights) -> bool:
    if cv.is_nonseparating(tri, a) or cv.is_nonseparating(tri, b):
        return cv.geometric_intersection(tri, a, b) == 0
    return cv.closed_disjoint(tri, a, b)


def distance_upper_bound(splitting: SplittingDescription,
                         budget: DiscBudget = DiscBudget(),
                         bfs_radius: int = 2,
                         bfs_pairs: int = 4) -> DistanceReport:
    """One-sided Hempel distance estimate from enumerated disc sets.

    The Y side is the image of the X side under the gluing word.  A
    shared vertex certifies 0, a disjoint cross pair certifies 1, and
    otherwise the lightest cross pairs go through the bounded
    curve-complex search; absence of a certificate is never a lower
    bound.
    """
    genus = splitting.genus
    tri = surface_triangulation(genus)
    cut = cut_system(genus)
    dx = enumerate_disc_set(cut, budget, side="X")
    phi = tuple(splitting.gluing)
    ys = [cc.word_action(genus, phi, c) for c in dx.curves()]
    budgets = {"disc": budget.to_json(), "bfs_radius": bfs_radius,
               "bfs_pairs": bfs_pairs}

    xkeys = {cv.canonical_form(tri, c): c for c in dx.curves()}
    for y in ys:
        k = cv.canonical_form(tri, y)
        if k in xkeys:
            report = DistanceReport(0, [xkeys[k]], _flags(0), budgets)
            assert _verify_witness(genus, report, dx, ys)
            return report

    best: Optional[Tuple[int, List[Weights]]] = None
    for x in dx.curves():
        for y in ys:
            if _cross_adjacent(tri, x, y):
                report = DistanceReport(1, [x, y], _flags(1), budgets)
                assert _verify_witness(genus, report, dx, ys)
                return report

    pairs = sorted(((x, y) for x in dx.curves() for y in ys),
                   key=lambda p: sum(p[0]) + sum(p[1]))
    for x, y in pairs[:bfs_pairs]:
        got = cc.bfs_distance(genus, x, y, radius=bfs_radius)
        if got is not None and (best is None or got[0] < best[0]):
            best = got
    if best is not None:
        report = DistanceReport(best[0], best[1], _flags(best[0]), budgets)
        assert _verify_witness(genus, report, dx, ys)
        return report
    return DistanceReport(None, None, _flags(None), budgets)


def _verify_witness(genus: int, report: DistanceReport,
                    dx: DiscSet, ys: Sequence[Weights]) -> bool:
    """Witness endpoints come from the enumerated sets and consecutive
    curves are disjoint."""
    if report.witness_path is None:
        return True
    tri = surface_triangulation(genus)
    path = report.witness_path
    first, last = path[0], path[-1]
    in_x = any(cv.closed_equal(tri, first, c) for c in dx.curves())
    in_y = any(cv.closed_equal(tri, last, c) for c in ys)
    if report.upper_bound == 0:
        in_y = any(cv.closed_equal(tri, first, c) for c in ys)
        return in_x and in_y
    if not (in_x and in_y):
        return False
    return all(_cross_adjacent(tri, path[i], path[i + 1])
               for i in range(len(path) - 1))


# -- stabilization ----------------------------------------------------------------


def _embed_word(word: Word, genus: int) -> Word:
    """Include a genus-g word into genus g+1: chain letters keep their
    index, the hook letter moves to the new hook."""
    hook, new_hook = 2 * genus + 1, 2 * genus + 3
    out = []
    for x in word:
        k = abs(x)
        nk = new_hook if k == hook else k
        out.append(nk if x > 0 else -nk)
    return tuple(out)


def stabilize(splitting: SplittingDescription) -> SplittingDescription:
    """Connected sum with the standard genus-1 splitting of the 3-sphere.

    The old gluing word embeds along the chain inclusion and the new
    handle is glued by the meridian-longitude swap t_x t_y t_x, so the
    manifold (and its homology) is unchanged.
    """
    genus = splitting.genus + 1
    if genus not in (2, 3, 4):
        raise ValueError("target genus data not shipped")
    tri = surface_triangulation(genus)
    table = load_presentation(genus)
    cut = cut_system(genus)
    x, dual = cut.curves[-1], 2 * genus
    # the block must live in a torus subsurface disjoint from the image
    # of the lower-genus subsurface, or the result is not a stabilization
    old = [table.generators.curves[k - 1]
           for k in list(range(1, 2 * genus - 1)) + [2 * genus + 1]]
    assert all(cv.geometric_intersection(tri, x, c) == 0 for c in old)
    assert cv.geometric_intersection(
        tri, x, table.generators.curves[dual - 1]) == 1
    tx = cut.meridian_twist_words()[-1]
    block = free_reduce(tx + (dual,) + tx)
    word = free_reduce(_embed_word(splitting.gluing, splitting.genus) + block)
    return SplittingDescription(genus=genus, gluing=word)


# -- double-coset invariants in finite quotients -----------------------------------


@dataclass(frozen=True)
class QuotientMap:
    """Generator images in a finite group with tuple-encoded elements."""

    quotient_id: str
    images: Tuple[object, ...]
    identity: object
    mul: object = field(compare=False)
    inv: object = field(compare=False)

    def evaluate(self, word: Word):
        acc = self.identity
        for x in word:
            g = self.images[abs(x) - 1]
            if x < 0:
                g = self.inv(g)
            acc = self.mul(acc, g)
        return acc


def quotient_from_record(record) -> QuotientMap:
    """Adapt a finite-quotient search record."""
    from . import quotients as Q

    return QuotientMap(
        quotient_id=f"sym{record.image.degree}:"
                    f"{'-'.join(map(str, record.image.common_cycle_type))}",
        images=tuple(record.image.images),
        identity=Q.identity_perm(record.image.degree),
        mul=Q.compose_perm,
        inv=Q.invert_perm,
    )


def sp_mod_p_quotient(genus: int, p: int) -> QuotientMap:
    """The symplectic representation reduced mod p."""
    table = load_presentation(genus)

    def mul(a, b):
        n = len(a)
        return tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(n)) % p
                  for j in range(n))
            for i in range(n))

    images = tuple(
        tuple(map(tuple, reduce_mod_p(chi((k,), genus), p)))
        for k in range(1, table.num_generators + 1))
    ident = tuple(map(tuple, identity_matrix(2 * genus)))

    def inv(m):
        # permutation-free inverse by exponentiation: finite group, so
        # m^(order-1); order found by cycling
        acc = m
        prev = ident
        while acc != ident:
            prev = acc
            acc = mul(acc, m)
        return prev

    return QuotientMap(quotient_id=f"sp{2 * genus}_mod{p}", images=images,
                       identity=ident, mul=mul, inv=inv)


@dataclass(frozen=True)
class DoubleCosetInvariant:
    quotient_id: str
    signature: Tuple[object, ...]
    digest: str
    subgroup_order: int
    coset_size: int

    def to_json(self) -> dict:
        return {
            "quotient_id": self.quotient_id,
            "digest": self.digest,
            "subgroup_order": self.subgroup_order,
            "coset_size": self.coset_size,
        }


def _closure(gens: List[object], mul, identity, cap: int):
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mul(a, g)
                if b not in seen:
                    if len(seen) >= cap:
                        raise ValueError("quotient too big")
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def _coset_signature(phi_image, K, mul) -> Tuple[object, ...]:
    left = {mul(k, phi_image) for k in K}
    out = set()
    for a in left:
        for k in K:
            out.add(mul(a, k))
    return tuple(sorted(out))


def _invariant(phi: Word, quotient: QuotientMap, gen_words: Sequence[Word],
               cap: int) -> DoubleCosetInvariant:
    gens = []
    for w in gen_words:
        g = quotient.evaluate(w)
        gens.append(g)
        gens.append(quotient.inv(g))
    K = _closure(gens, quotient.mul, quotient.identity, cap)
    sig = _coset_signature(quotient.evaluate(phi), K, quotient.mul)
    digest = hashlib.sha256(repr(sig).encode()).hexdigest()[:16]
    return DoubleCosetInvariant(
        quotient_id=quotient.quotient_id,
        signature=sig,
        digest=digest,
        subgroup_order=len(K),
        coset_size=len(sig),
    )


def double_coset_invariant(splitting: SplittingDescription,
                           quotient: QuotientMap,
                           cap: int = 100000) -> DoubleCosetInvariant:
    """Signature of the handlebody double coset of the gluing word.

    Constant on h1 * phi * h2 for handlebody words h1, h2, which is what
    makes it an invariant of the splitting rather than the gluing word.
    """
    return _invariant(splitting.gluing, quotient,
                      handlebody_generators(splitting.genus), cap)


def torelli_restricted_invariant(phi: Word, genus: int,
                                 quotient: QuotientMap,
                                 cap: int = 100000) -> DoubleCosetInvariant:
    """Double-coset signature with the subgroup restricted to Torelli
    handlebody words; only defined for Torelli gluings."""
    if not is_torelli(phi, genus):
        raise ValueError("not Torelli")
    return _invariant(phi, quotient,
                      torelli_handlebody_generators(genus), cap)
