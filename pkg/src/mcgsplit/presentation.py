"""Humphries twist generators and bundled mapping class group presentations.

Generators are Dehn twists b1..b_{2g+1}: the 2g-chain with homology
classes a1, b1, a1+a2, b2, a2+a3, ..., bg, plus one extra curve of
class a2 whose only chain crossing is with b4.  For genus 2 the extra
curve closes the chain, so the set reads as a plain 5-chain.  Curves,
classes, the intersection table and the relator words are shipped as
versioned JSON derived and certified by scripts/derive_data.py.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Tuple

from .symplectic import (
    AbelianGroupInvariants,
    chi_from_classes,
    cokernel_invariants,
    identity_matrix,
)
from .triangulation import Triangulation, surface_triangulation
from .words import Word, free_reduce, invert

DATA_DIR = Path(__file__).parent / "data"
BUNDLED_GENERA = (2, 3, 4)


@dataclass(frozen=True)
class GeneratorSet:
    """Labeled twist curves with their homology and intersection data.

    intersection_table[i][j] is the geometric intersection number of the
    curves behind b_{i+1} and b_{j+1}: 1 on chain neighbours, 1 between
    b_{2g+1} and b4 (the Humphries hook), 0 elsewhere.
    """

    genus: int
    labels: Tuple[str, ...]
    homology_classes: Tuple[Tuple[int, ...], ...]
    intersection_table: Tuple[Tuple[int, ...], ...]
    curves: Tuple[Tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.labels)

    def triangulation(self) -> Triangulation:
        return surface_triangulation(self.genus)

    def index(self, label: str) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class Relator:
    name: str
    word: Word


@dataclass(frozen=True)
class PresentationTable:
    genus: int
    generators: GeneratorSet
    relators: Tuple[Relator, ...]
    data_version: int

    @property
    def num_generators(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class RelationCheck:
    name: str
    chi_trivial: bool
    curves_trivial: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return self.chi_trivial and self.curves_trivial is not False


@dataclass(frozen=True)
class RelationReport:
    genus: int
    checks: Tuple[RelationCheck, ...]

    @property
    def all_identity(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.checks if not c.ok)


@lru_cache(maxsize=None)
def load_presentation(genus: int) -> PresentationTable:
    if genus < 2:
        raise ValueError("unsupported genus")
    if genus not in BUNDLED_GENERA:
        raise ValueError("presentation data not bundled")
    path = DATA_DIR / f"presentation_g{genus}.json"
    data = json.loads(path.read_text())
    assert data["genus"] == genus
    tri = surface_triangulation(genus)
    assert tuple(tuple(t) for t in data["triangles"]) == tri.triangles, (
        "bundled curves were derived on a different triangulation")
    gens = GeneratorSet(
        genus=genus,
        labels=tuple(data["labels"]),
        homology_classes=tuple(tuple(v) for v in data["homology_classes"]),
        intersection_table=tuple(tuple(r) for r in data["intersection_table"]),
        curves=tuple(tuple(w) for w in data["curves"]),
    )
    relators = tuple(Relator(name, tuple(word)) for name, word in data["relators"])
    return PresentationTable(
        genus=genus,
        generators=gens,
        relators=relators,
        data_version=data["format_version"],
    )


def verify_relations(table: PresentationTable, check_curves: bool = False,
                     curve_sample: int = 0, seed: int = 0) -> RelationReport:
    """Check every relator acts as the identity.

    Always checks the symplectic image.  With check_curves the action on
    the probe curves (plus curve_sample random twisted curves) is
    compared in the closed surface, which separates words the homology
    representation cannot.
    """
    classes = table.generators.homology_classes
    ident = identity_matrix(2 * table.genus)
    checks = []
    test_curves = None
    if check_curves:
        from . import curvecomplex as cc
        from . import curves as cv

        tri = table.generators.triangulation()
        probes, pair_probes = cv.standard_probes(tri)
        test_curves = [tuple(w) for w in probes + pair_probes]
        if curve_sample:
            test_curves.extend(
                cc.random_curves(table.genus, curve_sample, seed=seed))
    for rel in table.relators:
        chi_ok = chi_from_classes(rel.word, classes) == ident
        curves_ok = None
        if check_curves:
            from . import curvecomplex as cc
            from . import curves as cv

            tri = table.generators.triangulation()
            curves_ok = True
            for w in test_curves:
                img = cc.word_action(table.genus, rel.word, w)
                if not cv.closed_equal(tri, img, w):
                    curves_ok = False
                    break
        checks.append(RelationCheck(rel.name, chi_ok, curves_ok))
    return RelationReport(genus=table.genus, checks=tuple(checks))


def separating_twist_word(genus: int) -> Word:
    """Twist along the separating boundary of a neighborhood of the first
    two chain curves, as the chain relation word (b1 b2)^6."""
    load_presentation(genus)
    return (1, 2) * 6


def bounding_pair_word(genus: int) -> Word:
    """A bounding pair map t_{d1} t_{d2}^{-1} in the twist generators.

    d1, d2 are the boundary curves of a neighborhood of the 3-chain
    b1, b2, b3, so (b1 b2 b3)^4 = t_{d1} t_{d2}, and t_{d2} is the
    shipped transport conjugate of a generator twist.  The transport
    word is derived and certified against the curve machinery by
    scripts/derive_relations.py.
    """
    if genus == 2:
        raise ValueError("bounding pairs require g>=3")
    table = load_presentation(genus)
    path = DATA_DIR / f"bounding_pair_g{genus}.json"
    data = json.loads(path.read_text())
    transport = tuple(data["transport"])
    k = data["generator"]
    assert 1 <= k <= table.num_generators
    t_d2 = free_reduce(transport + (k,) + invert(transport))
    chain4 = (1, 2, 3) * 4
    return free_reduce(chain4 + invert(t_d2) + invert(t_d2))


def abelianization(table: PresentationTable) -> AbelianGroupInvariants:
    """Abelianized presentation: cokernel of the relator exponent matrix."""
    n = table.num_generators
    cols = []
    for rel in table.relators:
        col = [0] * n
        for letter in rel.word:
            col[abs(letter) - 1] += 1 if letter > 0 else -1
        cols.append(col)
    if not cols:
        return AbelianGroupInvariants(free_rank=n, torsion=())
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
    return cokernel_invariants(matrix)
