import pytest

from mcgsplit.presentation import (
    abelianization,
    bounding_pair_word,
    load_presentation,
    separating_twist_word,
    verify_relations,
)
from mcgsplit.symplectic import is_torelli
from mcgsplit.words import evaluate, free_reduce


def compose_perm(p, q):
    # p then q, matching left-to-right word evaluation
    return tuple(q[i] for i in p)


def invert_perm(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


# -- table shape --------------------------------------------------------------


@pytest.mark.parametrize("genus", [2, 3, 4])
def test_table_shape(genus):
    t = load_presentation(genus)
    n = 2 * genus + 1
    assert t.num_generators == n
    assert len(t.generators.labels) == n
    assert len(t.generators.curves) == n
    assert len(t.generators.homology_classes) == n
    assert all(len(v) == 2 * genus for v in t.generators.homology_classes)
    for rel in t.relators:
        assert rel.word == free_reduce(rel.word)
        assert all(1 <= abs(x) <= n for x in rel.word)


@pytest.mark.parametrize("genus", [3, 4])
def test_hook_generator_meets_only_b4(genus):
    t = load_presentation(genus)
    row = t.generators.intersection_table[-1]
    assert row[3] == 1
    assert sum(row) == 1


def test_unsupported_and_unbundled_errors():
    with pytest.raises(ValueError, match="unsupported genus"):
        load_presentation(1)
    with pytest.raises(ValueError, match="not bundled"):
        load_presentation(5)


# -- relators -----------------------------------------------------------------


@pytest.mark.parametrize("genus", [2, 3, 4])
def test_relators_symplectically_trivial(genus):
    report = verify_relations(load_presentation(genus))
    assert report.all_identity, report.failures()


def test_relators_trivial_on_curves_genus_two():
    report = verify_relations(load_presentation(2), check_curves=True,
                              curve_sample=4)
    assert report.all_identity, report.failures()
    assert all(c.curves_trivial for c in report.checks)


def test_braid_relators_match_intersection_table():
    t = load_presentation(3)
    table = t.generators.intersection_table
    for rel in t.relators:
        if rel.name.startswith("commute_"):
            _, i, j = rel.name.split("_")
            assert table[int(i) - 1][int(j) - 1] == 0
        if rel.name.startswith("braid_"):
            _, i, j = rel.name.split("_")
            assert table[int(i) - 1][int(j) - 1] == 1


# -- abelianization -----------------------------------------------------------


def test_abelianization_genus_two_is_z10():
    ab = abelianization(load_presentation(2))
    assert ab.free_rank == 0
    assert ab.torsion == (10,)


@pytest.mark.parametrize("genus", [3, 4])
def test_abelianization_trivial_for_higher_genus(genus):
    ab = abelianization(load_presentation(genus))
    assert ab.free_rank == 0
    assert ab.torsion == ()


def test_equal_three_cycles_fail_some_relator():
    # all generators to one 3-cycle: braids and commutations hold, but
    # no Z/3 quotient exists, so a genus-dependent relator must break
    t = load_presentation(2)
    sigma = (1, 2, 0)
    ident = (0, 1, 2)
    images = [sigma] * t.num_generators

    def ev(word):
        return evaluate(word, images, ident, compose_perm, invert_perm)

    broken = [r.name for r in t.relators if ev(r.word) != ident]
    assert broken
    for rel in t.relators:
        if rel.name.startswith(("braid_", "commute_")):
            assert ev(rel.word) == ident


# -- distinguished Torelli words ----------------------------------------------


@pytest.mark.parametrize("genus", [2, 3])
def test_separating_twist_word_is_torelli(genus):
    w = separating_twist_word(genus)
    assert w == (1, 2) * 6
    assert is_torelli(w, genus)


@pytest.mark.parametrize("genus", [3, 4])
def test_bounding_pair_word_is_torelli(genus):
    w = bounding_pair_word(genus)
    assert w
    assert is_torelli(w, genus)


def test_bounding_pair_word_rejects_genus_two():
    with pytest.raises(ValueError, match="g>=3"):
        bounding_pair_word(2)
