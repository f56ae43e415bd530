import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from mcgsplit import quotients as Q
from mcgsplit.presentation import load_presentation

T2 = load_presentation(2)


perms4 = st.permutations(range(4)).map(tuple)


# -- permutation arithmetic ----------------------------------------------------


@given(perms4, perms4)
def test_compose_invert(p, q):
    n = 4
    assert Q.compose_perm(p, Q.invert_perm(p)) == Q.identity_perm(n)
    r = Q.compose_perm(p, q)
    assert Q.compose_perm(Q.invert_perm(q), Q.compose_perm(Q.invert_perm(p), r)) \
        == Q.identity_perm(n)


@given(perms4, perms4)
def test_conjugation_preserves_cycle_type(p, s):
    assert Q.cycle_type(Q.conjugate_perm(p, s)) == Q.cycle_type(p)


def test_cycle_type_and_order():
    assert Q.cycle_type((1, 0, 2, 3)) == (2, 1, 1)
    assert Q.cycle_type((1, 2, 0, 4, 3)) == (3, 2)
    assert Q.perm_order((1, 2, 0, 4, 3)) == 6


def test_enumerate_cycle_types():
    assert Q.enumerate_cycle_types(1) == [(1,)]
    assert Q.enumerate_cycle_types(3) == [(3,), (2, 1), (1, 1, 1)]
    assert len(Q.enumerate_cycle_types(5)) == 7
    with pytest.raises(ValueError):
        Q.enumerate_cycle_types(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_class_representatives_and_classes(n):
    for ct in Q.enumerate_cycle_types(n):
        rep = Q.canonical_class_representative(ct, n)
        assert Q.cycle_type(rep) == ct
        cls = Q.conjugacy_class(n, ct)
        assert rep in cls
        assert all(Q.cycle_type(p) == ct for p in cls)


# -- signatures ----------------------------------------------------------------


def test_signature_invariant_under_conjugation():
    labels = T2.generators.labels
    image = Q.PermutationImage(4, ((1, 0, 3, 2), (2, 3, 0, 1),
                                   (1, 0, 3, 2), (2, 3, 0, 1),
                                   (1, 0, 3, 2)), labels)
    sig = Q.canonical_signature(image)
    for s in itertools.permutations(range(4)):
        conj = Q.PermutationImage(
            4, tuple(Q.conjugate_perm(p, s) for p in image.images), labels)
        assert Q.canonical_signature(conj) == sig


def test_signature_separates_cycle_types():
    labels = T2.generators.labels
    a = Q.PermutationImage(3, ((1, 0, 2),) * 5, labels)
    b = Q.PermutationImage(3, ((1, 2, 0),) * 5, labels)
    assert Q.canonical_signature(a) != Q.canonical_signature(b)


def test_mixed_cycle_types_rejected():
    with pytest.raises(AssertionError):
        Q.PermutationImage(3, ((1, 0, 2),) * 4 + ((1, 2, 0),),
                           T2.generators.labels)


# -- the search ----------------------------------------------------------------


def test_degree_one_trivial_homomorphism():
    cfg = Q.SearchConfig(genus=2, degree_range=(1, 1), require_nontrivial=False)
    recs = list(Q.search(cfg, T2))
    assert len(recs) == 1
    r = recs[0]
    assert r.relations_pass and r.factors_through_sp
    assert r.image_order == 1
    assert Q.canonical_signature(r.image) == r.signature


def test_degree_two_ground_truth():
    # unique nontrivial signature: every generator to the transposition
    cfg = Q.SearchConfig(genus=2, degree_range=(2, 2), require_nontrivial=True)
    recs = list(Q.search(cfg, T2))
    assert len(recs) == 1
    r = recs[0]
    assert r.image.images == ((1, 0),) * 5
    assert r.relations_pass
    assert r.factors_through_sp
    assert r.image_order == 2


def test_degree_two_exhaustive_cross_check():
    # oracle: try all 2^5 sign patterns by hand; identity kills a twist
    transposition = (1, 0)
    survivors = []
    for pattern in itertools.product([Q.identity_perm(2), transposition],
                                     repeat=5):
        image = [p for p in pattern]
        ok = all(
            Q.evaluate(rel.word, image, Q.identity_perm(2),
                       Q.compose_perm, Q.invert_perm) == Q.identity_perm(2)
            for rel in T2.relators)
        if ok and any(p != Q.identity_perm(2) for p in image):
            survivors.append(pattern)
    assert survivors == [(transposition,) * 5]


def test_search_is_deterministic_and_budgeted():
    cfg = Q.SearchConfig(genus=2, degree_range=(1, 4), require_nontrivial=True)
    a = [r.to_json() for r in Q.search(cfg, T2)]
    b = [r.to_json() for r in Q.search(cfg, T2)]
    assert a == b
    few = list(Q.search(Q.SearchConfig(genus=2, degree_range=(1, 4),
                                       require_nontrivial=True, budget=2), T2))
    assert len(few) == 2

    def strip(rec):
        return {k: v for k, v in rec.items() if k != "provenance"}

    assert [strip(r.to_json()) for r in few] == [strip(x) for x in a[:2]]


def test_search_records_reverify():
    cfg = Q.SearchConfig(genus=2, degree_range=(1, 5), require_nontrivial=True)
    recs = list(Q.search(cfg, T2))
    assert recs
    ident = None
    for r in recs:
        assert r.relations_pass
        ident = Q.identity_perm(r.image.degree)
        for rel in T2.relators:
            assert r.image.evaluate_word(rel.word) == ident
        kinds = {Q.cycle_type(p) for p in r.image.images}
        assert len(kinds) == 1


def test_cyclic_five_quotient_does_not_factor_through_sp():
    # the Z/5 quotient from the abelianization kills no separating twist
    cfg = Q.SearchConfig(genus=2, degree_range=(5, 5),
                         cycle_type_filter=((5,),))
    recs = list(Q.search(cfg, T2))
    assert len(recs) == 1
    r = recs[0]
    assert r.relations_pass
    assert not r.factors_through_sp
    assert r.image_order == 5
    assert not Q.generated_by_involutions(r.image)


def test_cycle_type_filter():
    cfg = Q.SearchConfig(genus=2, degree_range=(1, 5),
                         cycle_type_filter=((2, 2, 1),))
    recs = list(Q.search(cfg, T2))
    assert recs
    assert all(r.image.common_cycle_type == (2, 2, 1) for r in recs)


def test_config_validation():
    with pytest.raises(ValueError):
        Q.SearchConfig(genus=2, degree_range=(0, 3))
    with pytest.raises(ValueError):
        Q.SearchConfig(genus=2, degree_range=(3, 2))
    with pytest.raises(ValueError):
        Q.SearchConfig(genus=2, degree_range=(1, 3), budget=-1)


# -- store, manifest, resume ----------------------------------------------------


def test_run_search_store_and_resume(tmp_path):
    cfg = Q.SearchConfig(genus=2, degree_range=(1, 4), require_nontrivial=True)
    path = tmp_path / "out.jsonl"
    m = Q.run_search(cfg, path)
    text = path.read_text()
    lines = [json.loads(x) for x in text.splitlines()]
    assert len(lines) == m.records and not m.truncated
    assert all(x["schema_version"] == Q.SCHEMA_VERSION for x in lines)
    # identical rerun is a no-op resume
    m2 = Q.run_search(cfg, path)
    assert path.read_text() == text
    assert m2.records == m.records
    # worker count does not change the bytes
    m3 = Q.run_search(cfg, tmp_path / "w.jsonl", workers=2)
    assert (tmp_path / "w.jsonl").read_text() == text
    assert m3.records == m.records


def test_run_search_budget_truncation(tmp_path):
    cfg = Q.SearchConfig(genus=2, degree_range=(1, 4),
                         require_nontrivial=True, budget=0)
    m = Q.run_search(cfg, tmp_path / "z.jsonl")
    assert m.truncated
    assert (tmp_path / "z.jsonl").read_text() == ""
    cfg2 = Q.SearchConfig(genus=2, degree_range=(1, 5),
                          require_nontrivial=True, budget=3)
    m2 = Q.run_search(cfg2, tmp_path / "t.jsonl")
    assert m2.truncated and m2.records == 3
    assert len((tmp_path / "t.jsonl").read_text().splitlines()) == 3
