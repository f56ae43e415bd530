"""Symplectic representation of twist words and integer Smith normal form.

Homology basis convention everywhere: a_1, b_1, a_2, b_2, ..., a_g, b_g with
<a_i, b_i> = +1.  All arithmetic is over plain Python ints, so entries are
arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .words import Word, evaluate

Matrix = Tuple[Tuple[int, ...], ...]
Vector = Tuple[int, ...]


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b[0])
    k = len(b)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(row[t] * col[t] for t in range(k)) for col in bt) for row in a
    )


def mat_vec(a: Matrix, v: Sequence[int]) -> Vector:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


def standard_symplectic_form(genus: int) -> Matrix:
    """Block diagonal [[0,1],[-1,0]] per handle."""
    n = 2 * genus
    rows = [[0] * n for _ in range(n)]
    for i in range(genus):
        rows[2 * i][2 * i + 1] = 1
        rows[2 * i + 1][2 * i] = -1
    return tuple(tuple(r) for r in rows)


def pairing(x: Sequence[int], y: Sequence[int]) -> int:
    """<x, y> in the a1,b1,...,ag,bg basis."""
    total = 0
    for i in range(len(x) // 2):
        total += x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i]
    return total


def is_symplectic(m: Matrix, genus: int) -> bool:
    j = standard_symplectic_form(genus)
    mt = tuple(zip(*m))
    return mat_mul(mat_mul(mt, j), m) == j


def symplectic_inverse(m: Matrix, genus: int) -> Matrix:
    """M^-1 = J^-1 M^T J, valid exactly when M^T J M = J."""
    j = standard_symplectic_form(genus)
    jinv = tuple(tuple(-x for x in row) for row in j)  # J^-1 = -J here
    mt = tuple(zip(*m))
    return mat_mul(mat_mul(jinv, mt), j)


def transvection(v: Sequence[int]) -> Matrix:
    """Matrix of x |-> x + <x, v> v."""
    n = len(v)
    rows = []
    for i in range(n):
        row = []
        for k in range(n):
            e = 1 if i == k else 0
            # column k is the image of the basis vector e_k
            row.append(e + pairing([1 if t == k else 0 for t in range(n)], v) * v[i])
        rows.append(tuple(row))
    return tuple(rows)


def chi_from_classes(word: Word, classes: Sequence[Sequence[int]]) -> Matrix:
    """Symplectic image of a word given the generator homology classes.

    Letters act left to right as matrix factors, so the rightmost letter is
    applied to a column vector first.
    """
    genus = len(classes[0]) // 2
    images = [transvection(tuple(v)) for v in classes]
    inv = lambda m: symplectic_inverse(m, genus)
    return evaluate(word, images, identity_matrix(2 * genus), mat_mul, inv)


def chi(word: Word, genus: int) -> Matrix:
    from .presentation import load_presentation

    table = load_presentation(genus)
    return chi_from_classes(word, table.generators.homology_classes)


def is_torelli(word: Word, genus: int) -> bool:
    return chi(word, genus) == identity_matrix(2 * genus)


def reduce_mod_p(m: Matrix, p: int) -> Matrix:
    if p < 2:
        raise ValueError("modulus must be at least 2")
    return tuple(tuple(x % p for x in row) for row in m)


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """Cokernel shape: free rank plus the torsion divisibility chain."""

    free_rank: int
    torsion: Tuple[int, ...]

    def __post_init__(self):
        for i, d in enumerate(self.torsion):
            assert d > 1, "torsion entries must exceed 1"
            if i + 1 < len(self.torsion):
                assert self.torsion[i + 1] % d == 0, "violates divisibility chain"

    @property
    def order(self):
        if self.free_rank:
            return None
        total = 1
        for d in self.torsion:
            total *= d
        return total

    def to_json(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Diagonal of the Smith normal form, nonnegative, d_i | d_{i+1}.

    Pivot choice: smallest nonzero absolute value, ties broken row-major.
    The rule is fixed so that runs are reproducible.
    """
    a = [list(row) for row in matrix]
    if not a or not a[0]:
        return []
    rows, cols = len(a), len(a[0])
    diag: List[int] = []
    top = 0
    while top < rows and top < cols:
        # locate pivot among a[top:][top:]
        pivot = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = abs(a[i][j])
                if v and (pivot is None or v < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[top], a[pi] = a[pi], a[top]
        for row in a:
            row[top], row[pj] = row[pj], row[top]
        if a[top][top] < 0:
            a[top] = [-x for x in a[top]]
        # clear the pivot row and column; restart if a remainder appears
        dirty = False
        p = a[top][top]
        for i in range(top + 1, rows):
            q = a[i][top] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[top])]
            if a[i][top]:
                dirty = True
        for j in range(top + 1, cols):
            q = a[top][j] // p
            if q:
                for i in range(rows):
                    a[i][j] -= q * a[i][top]
            if a[top][j]:
                dirty = True
        if dirty:
            continue
        # divisibility: fold in any offending entry and redo this pivot
        offender = None
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if a[i][j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[top] = [x + y for x, y in zip(a[top], a[offender])]
            continue
        diag.append(p)
        top += 1
    return diag


def cokernel_invariants(matrix: Sequence[Sequence[int]]) -> AbelianGroupInvariants:
    """Invariants of Z^rows / (column span of matrix)."""
    a = [list(row) for row in matrix]
    n = len(a)
    diag = smith_normal_form(a)
    rank = len([d for d in diag if d != 0])
    torsion = tuple(d for d in diag if d > 1)
    return AbelianGroupInvariants(free_rank=n - rank, torsion=torsion)


def meridian_inclusion(genus: int) -> Matrix:
    """2g x g matrix whose columns are the meridian classes a_1..a_g."""
    rows = []
    for i in range(2 * genus):
        rows.append(tuple(1 if (i % 2 == 0 and j == i // 2) else 0 for j in range(genus)))
    return tuple(rows)


def homology_of_splitting(word: Word, genus: int) -> AbelianGroupInvariants:
    """H_1 of the closed 3-manifold glued from two genus-g handlebodies.

    The first handlebody kills the meridian classes a_1..a_g, the second
    kills their images under the gluing word.  The quotient is the cokernel
    of the 2g x 2g matrix [A | chi(word) A].
    """
    a = meridian_inclusion(genus)
    m = chi(word, genus)
    ma = mat_mul(m, a)
    combined = tuple(row_a + row_ma for row_a, row_ma in zip(a, ma))
    return cokernel_invariants(combined)


def exact_rank(matrix: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free elimination.  Used for span checks."""
    a = [[Fraction(x) for x in row] for row in matrix]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    rank = 0
    col = 0
    while rank < rows and col < cols:
        pivot = next((i for i in range(rank, rows) if a[i][col]), None)
        if pivot is None:
            col += 1
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for i in range(rows):
            if i != rank and a[i][col]:
                f = a[i][col] / a[rank][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        col += 1
    return rank


def spans_lagrangian_summand(vectors: Iterable[Sequence[int]], genus: int) -> bool:
    """True when the vectors span a rank-g direct summand with zero pairing.

    This is the certificate used for cut systems: the meridian classes must
    look like a_1..a_g after a change of basis.
    """
    vecs = [tuple(v) for v in vectors]
    if len(vecs) != genus:
        return False
    for x in vecs:
        for y in vecs:
            if pairing(x, y) != 0:
                return False
    if exact_rank(vecs) != genus:
        return False
    # direct summand: SNF of the g x 2g matrix must be all ones
    diag = smith_normal_form(vecs)
    return diag == [1] * genus
