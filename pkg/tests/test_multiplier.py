import random

import pytest
from hypothesis import given, strategies as st

from nilmult._arith import factorize
from nilmult.abelian import AbelianGroup, canonicalize
from nilmult.group_engine import abelian_table, cyclic, dihedral, extraspecial, quaternion, symmetric
from nilmult.multiplier import (
    D8_FORMULA,
    KnownMultiplier,
    MultiplierQuery,
    abelian_multiplier,
    dihedral8_multiplier,
    is_dihedral,
    known_multiplier,
)
from nilmult.witt_hall import witt

from oracles import classical_abelian_schur, prime_power_multiset


def _elementary_divisors(g):
    return prime_power_multiset(g.invariants)


def test_abelian_examples():
    for p in (2, 3, 5):
        m = abelian_multiplier(AbelianGroup((p, p)), 2)
        assert m.invariants == (p, p) and m.order == p**2
    assert abelian_multiplier(canonicalize([6]), 5) == AbelianGroup()
    assert abelian_multiplier(AbelianGroup((4, 2)), 1) == AbelianGroup((2,))
    with pytest.raises(ValueError):
        abelian_multiplier(AbelianGroup((2,)), 0)


def test_classical_oracle_seeded():
    rng = random.Random(4)
    for _ in range(200):
        orders = [rng.randint(1, 64) for _ in range(rng.randint(1, 5))]
        g = canonicalize(orders)
        assert _elementary_divisors(abelian_multiplier(g, 1)) == classical_abelian_schur(orders)


cyclic_lists = st.lists(st.integers(2, 40), min_size=1, max_size=4)


@given(cyclic_lists, st.integers(1, 4))
def test_multiplier_order_divides_power_of_group_order(orders, c):
    g = canonicalize(orders)
    m = abelian_multiplier(g, c)
    # |M| divides a power of |G| exactly when its primes all divide |G|
    assert set(factorize(m.order)) <= set(factorize(g.order))
    assert g.exponent % m.exponent == 0


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 5), st.integers(1, 4))
def test_elementary_rank_is_witt(p, d, c):
    m = abelian_multiplier(AbelianGroup.elementary(p, d), c)
    want = witt(c + 1, d) if d > 1 else 0
    assert m.rank == want and m.order == p**want


def test_d8_formula():
    assert dihedral8_multiplier(1) == AbelianGroup((4,))
    assert dihedral8_multiplier(2) == AbelianGroup((4, 2))
    assert dihedral8_multiplier(3) == AbelianGroup((4, 2, 2))
    assert dihedral8_multiplier(2).exponent == 4


def test_known_multiplier_dispatch():
    d8 = dihedral(4)
    m2 = known_multiplier(MultiplierQuery(d8, 2))
    assert m2.value == AbelianGroup((4, 2)) and m2.provenance == D8_FORMULA
    assert str(m2).startswith("Z4 + Z2 (provenance: ")
    assert known_multiplier(MultiplierQuery(d8, 1)).value == AbelianGroup((2,))
    assert known_multiplier(MultiplierQuery(d8, 1), d8_formula_at_c1=True).value == AbelianGroup((4,))
    assert known_multiplier(MultiplierQuery(canonicalize([6]), 5)).value == AbelianGroup()
    assert known_multiplier(MultiplierQuery(abelian_table([4, 2]), 1)).value == AbelianGroup((2,))
    assert known_multiplier(MultiplierQuery(quaternion(), 2)) is None
    assert known_multiplier(MultiplierQuery(quaternion(), 1)).value == AbelianGroup()
    assert known_multiplier(MultiplierQuery(extraspecial(3), 1)).value == AbelianGroup((3, 3))
    assert known_multiplier(MultiplierQuery(extraspecial(3, False), 1)).value == AbelianGroup()
    assert known_multiplier(MultiplierQuery(extraspecial(3), 2)) is None
    assert known_multiplier(MultiplierQuery(dihedral(8), 2)) is None
    assert known_multiplier(MultiplierQuery(symmetric(4), 1)) is None
    with pytest.raises(ValueError):
        MultiplierQuery(d8, 0)
    with pytest.raises(ValueError):
        KnownMultiplier(AbelianGroup(), "")


def test_dihedral_recogniser():
    assert is_dihedral(dihedral(4)) == 4
    assert is_dihedral(symmetric(3)) == 3
    assert is_dihedral(quaternion()) is None
    assert is_dihedral(cyclic(8)) is None
    assert is_dihedral(symmetric(4)) is None
