from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from nilmult.abelian import AbelianGroup
from nilmult.caps import CapExceeded
from nilmult.corpus import CORPUS, as_table, containment_failures
from nilmult.group_engine import (
    FiniteGroup,
    GroupError,
    abelian_table,
    cycles_to_images,
    cyclic,
    dihedral,
    direct_product,
    extraspecial,
    from_permutations,
    quaternion,
    symmetric,
)

from oracles import perm_closure, perm_order


def _label_set(g, s):
    return sorted(g.labels[x] for x in s)


def test_table_validation():
    with pytest.raises(GroupError):
        FiniteGroup(["a", "b"], [[0, 1], [0, 1]])
    with pytest.raises(GroupError):
        FiniteGroup(["a"], [[0, 0]])
    # Latin square with identity but not associative (order 5 loop)
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        FiniteGroup(list("abcde"), loop)


def test_identity_need_not_be_first():
    g = FiniteGroup(["a", "e"], [[1, 0], [0, 1]])
    assert g.identity == 1 and g.inv(0) == 0 and g.element_orders() == [2, 1]


def test_permutation_group_d8():
    g = from_permutations(4, [cycles_to_images(4, [[1, 2, 3, 4]]), cycles_to_images(4, [[1, 3]])])
    assert g.order == 8
    assert sorted(g.element_orders()) == [1, 2, 2, 2, 2, 2, 4, 4]
    assert g.identity == 0


def test_permutation_edge_cases():
    assert from_permutations(3, []).order == 1
    assert from_permutations(3, [cycles_to_images(3, [[1, 2, 3]])]).order == 3
    with pytest.raises(GroupError):
        from_permutations(3, [[1, 1, 2]])


def test_permutation_closure_cap(monkeypatch):
    monkeypatch.setenv("NILMULT_CAPS", "closure=100")
    with pytest.raises(CapExceeded):
        symmetric(5)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.lists(st.permutations(range(n)), min_size=0, max_size=2)))
def test_permutation_closure_matches_oracle(perms):
    if not perms:
        return
    degree = len(perms[0])
    g = from_permutations(degree, [[v + 1 for v in p] for p in perms])
    oracle = perm_closure([tuple(p) for p in perms])
    assert g.order == len(oracle)
    assert Counter(g.element_orders()) == Counter(perm_order(p) for p in oracle)


def test_commutator_subgroups_d8():
    g = dihedral(4)
    derived = g.derived_subgroup()
    assert _label_set(g, derived) == ["e", "r2"]
    assert len(g.commutator_subgroup(g.elements, g.center())) == 1
    ab = abelian_table([4, 2])
    assert len(ab.derived_subgroup()) == 1
    with pytest.raises(GroupError):
        g.commutator_subgroup({g.identity, 1, 2}, g.elements)


def test_series_d8():
    g = dihedral(4)
    an = g.analysis()
    assert [len(s) for s in an.lower_central] == [8, 2, 1]
    assert [len(s) for s in an.upper_central] == [1, 2, 8]
    assert an.class_t == 2 and an.exponent == 4 and an.d == 2 and an.special_rank == 2
    assert g.subgroup_exponent(g.center()) == 2


def test_series_extraspecial_and_abelian():
    h = extraspecial(3)
    assert h.analysis().class_t == 2 and len(h.analysis().gamma(2)) == 3
    a = abelian_table([6])
    assert [len(s) for s in a.lower_central_series()] == [6, 1]
    assert [len(s) for s in a.upper_central_series()] == [1, 6]


def test_quotients():
    g = dihedral(4)
    q = g.quotient(g.derived_subgroup())
    assert q.order == 4 and q.exponent == 2
    assert g.quotient(g.trivial).order == 8
    assert g.quotient(g.elements).order == 1
    s = next(x for x in range(8) if g.labels[x] == "s")
    with pytest.raises(GroupError):
        g.quotient(g.closure([s]))


def test_abelianization():
    assert dihedral(4).abelianization() == AbelianGroup((2, 2))
    assert cyclic(6).abelianization() == AbelianGroup((6,))
    assert extraspecial(3).abelianization() == AbelianGroup((3, 3))
    assert extraspecial(5, False).abelianization() == AbelianGroup((5, 5))
    assert symmetric(4).abelianization() == AbelianGroup((2,))


def test_generators_and_rank():
    assert dihedral(4).min_generators() == 2
    assert cyclic(6).min_generators() == 1
    assert abelian_table([2, 2, 2]).min_generators() == 3
    assert abelian_table([2, 2]).special_rank() == 2
    assert dihedral(4).special_rank_search() == 2
    assert len(dihedral(4).subgroups()) == 10
    assert cyclic(12).special_rank_search() == 1
    assert symmetric(4).min_generators() == 2
    assert symmetric(3).min_generators_search() == 2


def test_special_rank_cap(monkeypatch):
    monkeypatch.setenv("NILMULT_CAPS", "special_rank=16")
    with pytest.raises(CapExceeded):
        symmetric(4).special_rank()
    assert symmetric(4).analysis().special_rank is None


def test_subgroup_counts():
    assert len(quaternion().subgroups()) == 6
    assert len(extraspecial(3).subgroups()) == 19
    assert len(symmetric(4).subgroups()) == 30
    assert len(symmetric(4).normal_subgroups()) == 4
    assert symmetric(4).analysis().class_t is None


def _small_corpus_groups(limit):
    for e in CORPUS:
        g = as_table(e.build())
        if g.order <= limit:
            yield e.name, g


@pytest.mark.parametrize("name, g", list(_small_corpus_groups(32)))
def test_series_consistency(name, g):
    an = g.analysis()
    assert an.lower_central[0] == g.elements
    if g.order > 1:
        assert an.lower_central[1] == g.commutator_subgroup(g.elements, g.elements)
    assert an.upper_central[min(1, len(an.upper_central) - 1)] == g.center() or g.order == 1
    if an.nilpotent:
        assert len(an.lower_central) == len(an.upper_central)
    assert g.abelianization().order == g.order // len(g.derived_subgroup())
    for n in g.normal_subgroups():
        assert g.quotient(n).order == g.order // len(n)


@pytest.mark.parametrize("name, g", list(_small_corpus_groups(32)))
def test_commutator_containment(name, g):
    assert containment_failures(g) == []


@pytest.mark.parametrize("name, g", list(_small_corpus_groups(64)))
def test_special_rank_subadditive(name, g):
    r = g.special_rank_search()
    for n in g.normal_subgroups():
        assert r <= g.quotient(n).special_rank_search() + g.subgroup_as_group(n).special_rank_search()


def test_p_group_invariants():
    for g in (dihedral(8), quaternion(), extraspecial(3, False), abelian_table([9, 3])):
        an = g.analysis()
        p = g.prime()
        e = an.exponent
        while e % p == 0:
            e //= p
        assert e == 1
        assert an.special_rank >= an.d
    assert cyclic(6).prime() is None


def test_direct_product():
    g = direct_product(dihedral(4), cyclic(2))
    assert g.order == 16 and g.analysis().class_t == 2 and g.min_generators() == 3
