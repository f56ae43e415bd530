import itertools
import math
import random

from hypothesis import given, settings, strategies as st

from mcgsplit.symplectic import (
    AbelianGroupInvariants,
    chi_from_classes,
    cokernel_invariants,
    identity_matrix,
    is_symplectic,
    mat_mul,
    mat_vec,
    meridian_inclusion,
    pairing,
    smith_normal_form,
    spans_lagrangian_summand,
    standard_symplectic_form,
    symplectic_inverse,
    transvection,
)

# Humphries curve classes in the a1,b1,...,ag,bg basis: the 2g-chain
# a1, b1, a1+a2, b2, a2+a3, ..., bg followed by the extra a2 curve.
CHAIN2 = [
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (1, 0, 1, 0),
    (0, 0, 0, 1),
    (0, 0, 1, 0),
]
CHAIN3 = [
    (1, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 0),
    (1, 0, 1, 0, 0, 0),
    (0, 0, 0, 1, 0, 0),
    (0, 0, 1, 0, 1, 0),
    (0, 0, 0, 0, 0, 1),
    (0, 0, 1, 0, 0, 0),
]

small_vec2 = st.tuples(*[st.integers(-3, 3)] * 4)
small_vec3 = st.tuples(*[st.integers(-2, 2)] * 6)


@given(small_vec2)
def test_transvection_is_symplectic_genus2(v):
    assert is_symplectic(transvection(v), 2)


@given(small_vec3)
def test_transvection_is_symplectic_genus3(v):
    assert is_symplectic(transvection(v), 3)


@given(small_vec2)
def test_transvection_sign_invariance(v):
    assert transvection(v) == transvection(tuple(-x for x in v))


@given(small_vec2, small_vec2)
def test_transvection_formula(v, x):
    got = mat_vec(transvection(v), x)
    expect = tuple(xi + pairing(x, v) * vi for xi, vi in zip(x, v))
    assert got == expect


def test_symplectic_inverse():
    m = chi_from_classes((1, 2, 3, -4, 5, 1), CHAIN2)
    assert mat_mul(m, symplectic_inverse(m, 2)) == identity_matrix(4)


@given(st.lists(st.integers(-5, 5).filter(bool), max_size=12).map(tuple))
def test_chi_is_a_homomorphism(w):
    cut = len(w) // 2
    u, v = w[:cut], w[cut:]
    lhs = chi_from_classes(w, CHAIN2)
    rhs = mat_mul(chi_from_classes(u, CHAIN2), chi_from_classes(v, CHAIN2))
    assert lhs == rhs
    assert is_symplectic(lhs, 2)


def test_braid_relation_on_matrices():
    # twists along curves meeting once satisfy the braid relation
    for i in range(4):
        a, b = i + 1, i + 2
        assert chi_from_classes((a, b, a), CHAIN2) == chi_from_classes((b, a, b), CHAIN2)


def test_commuting_relation_on_matrices():
    for i, j in itertools.combinations(range(1, 6), 2):
        vi, vj = CHAIN2[i - 1], CHAIN2[j - 1]
        if pairing(vi, vj) == 0:
            assert chi_from_classes((i, j), CHAIN2) == chi_from_classes((j, i), CHAIN2)


def test_separating_twist_word_is_symplectically_trivial():
    word = (1, 2) * 6
    assert chi_from_classes(word, CHAIN2) == identity_matrix(4)
    word3 = (1, 2) * 6
    assert chi_from_classes(word3, CHAIN3) == identity_matrix(6)


def test_hyperelliptic_word_acts_as_minus_identity():
    word = (1, 2, 3, 4, 5, 5, 4, 3, 2, 1)
    m = chi_from_classes(word, CHAIN2)
    assert m == tuple(tuple(-x for x in row) for row in identity_matrix(4))


def test_chain_relator_is_symplectically_trivial():
    word = (1, 2, 3, 4, 5) * 6
    assert chi_from_classes(word, CHAIN2) == identity_matrix(4)


# ---------------------------------------------------------------------------
# Smith normal form against an independent oracle.


def minors_gcd_invariants(mat):
    """Invariant factors via determinantal divisors: d_k = gcd of k x k minors."""
    rows, cols = len(mat), len(mat[0]) if mat else 0
    n = min(rows, cols)
    prev = 1
    out = []
    for k in range(1, n + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                sub = [[mat[i][j] for j in ci] for i in ri]
                g = math.gcd(g, _det(sub))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def _det(m):
    m = [row[:] for row in m]
    n = len(m)
    from fractions import Fraction

    m = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    assert det.denominator == 1
    return int(det)


def test_snf_frozen_examples():
    assert smith_normal_form([[0, 0], [0, 0]]) == []
    assert smith_normal_form([[1, 0], [0, 6]]) == [1, 6]
    assert smith_normal_form([[2, 0], [0, 4]]) == [2, 4]
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]
    assert smith_normal_form([[4, 2], [2, 4]]) == [2, 6]

    inv = cokernel_invariants([[0, 0], [0, 0]])
    assert inv.free_rank == 2 and inv.torsion == ()
    inv = cokernel_invariants([[1, 0], [0, 6]])
    assert inv.free_rank == 0 and inv.torsion == (6,)
    inv = cokernel_invariants([[2, 0], [0, 4]])
    assert inv.torsion == (2, 4)
    assert inv.order == 8


@settings(max_examples=150)
@given(
    st.integers(1, 3),
    st.integers(1, 3),
    st.data(),
)
def test_snf_matches_minor_gcds(rows, cols, data):
    mat = [
        [data.draw(st.integers(-4, 4)) for _ in range(cols)] for _ in range(rows)
    ]
    diag = [d for d in smith_normal_form(mat) if d]
    assert diag == minors_gcd_invariants(mat)
    for i in range(len(diag) - 1):
        assert diag[i + 1] % diag[i] == 0


def test_snf_exhaustive_2x2_small():
    for entries in itertools.product(range(-2, 3), repeat=4):
        mat = [list(entries[:2]), list(entries[2:])]
        diag = [d for d in smith_normal_form(mat) if d]
        assert diag == minors_gcd_invariants(mat), mat


def test_cokernel_group_orders_by_counting():
    # brute-force the quotient group Z^2 / im(A) for nonsingular A
    rng = random.Random(7)
    for _ in range(25):
        a = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        d = _det(a)
        if d == 0:
            continue
        inv = cokernel_invariants(a)
        assert inv.free_rank == 0
        assert inv.order == abs(d)


def test_meridian_inclusion_columns():
    a = meridian_inclusion(2)
    assert len(a) == 4 and len(a[0]) == 2
    cols = list(zip(*a))
    assert cols[0] == (1, 0, 0, 0)
    assert cols[1] == (0, 0, 1, 0)


def test_lagrangian_summand_certificate():
    assert spans_lagrangian_summand([(1, 0, 0, 0), (0, 0, 1, 0)], 2)
    # pairing obstruction
    assert not spans_lagrangian_summand([(1, 0, 0, 0), (0, 1, 0, 0)], 2)
    # rank obstruction
    assert not spans_lagrangian_summand([(1, 0, 0, 0), (1, 0, 0, 0)], 2)
    # index obstruction: spans a finite-index sublattice, not a summand
    assert not spans_lagrangian_summand([(1, 0, 0, 0), (0, 0, 2, 0)], 2)
    # wrong count
    assert not spans_lagrangian_summand([(1, 0, 0, 0)], 2)


def test_invariants_json_shape():
    inv = AbelianGroupInvariants(free_rank=1, torsion=(2, 4))
    assert inv.to_json() == {"rank": 1, "torsion": [2, 4]}
    assert inv.order is None
