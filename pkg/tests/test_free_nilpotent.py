import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from nilmult.caps import CapExceeded
from nilmult.free_nilpotent import (
    collect,
    commutator,
    expand_commutator,
    free_nilpotent_group,
    inverse,
    multiply,
    parse_word,
    quotient_rank,
    stratum_quotient,
)
from nilmult.witt_hall import hall_basis, witt

from oracles import Magnus, free_reduce

SMALL = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)]


def _tree(b):
    return ("x", b.letter) if b.is_letter else ("[", _tree(b.left), _tree(b.right))


def _random_word(rng, d, length):
    return [rng.choice([1, -1]) * rng.randint(1, d) for _ in range(length)]


def test_vector_length():
    for d, c in SMALL:
        g = free_nilpotent_group(d, c)
        assert g.m == sum(witt(n, d) for n in range(1, c + 1))
        assert g.identity().is_identity()


def test_basic_examples():
    u = collect([2, 1], 2, 2)
    assert u.exponents == (1, 1, 1) and str(u) == "x1 x2 [x2,x1]"
    assert collect([], 2, 3).is_identity()
    assert collect([1, -1], 2, 3).is_identity()
    g = free_nilpotent_group(2, 3)
    assert commutator(g.letter(1), g.letter(1)).is_identity()
    c21 = commutator(g.letter(2), g.letter(1))
    assert c21.support() == {2: 1}
    assert multiply(g.identity(), c21) == c21


def test_free_group_identity_by_reduction():
    # x2 x1 == x1 x2 [x2, x1] as reduced free-group words
    lhs = free_reduce([2, 1])
    rhs = free_reduce([1, 2] + [-2, -1, 2, 1])
    assert lhs == rhs


def test_errors():
    with pytest.raises(ValueError):
        collect([3], 2, 2)
    with pytest.raises(ValueError):
        collect([0], 2, 2)
    a = collect([1], 2, 2)
    b = collect([1], 3, 2)
    with pytest.raises(ValueError):
        multiply(a, b)
    with pytest.raises(CapExceeded):
        free_nilpotent_group(5, 2)
    with pytest.raises(ValueError):
        quotient_rank(2, 2, 0)


@pytest.mark.parametrize("d, c", SMALL + [(4, 3), (2, 5)])
def test_collection_agrees_with_magnus_embedding(d, c):
    rng = random.Random(1000 * d + c)
    g = free_nilpotent_group(d, c)
    magnus = Magnus(d, c)
    for _ in range(40):
        w = _random_word(rng, d, rng.randint(0, 10))
        u = g.collect(w)
        assert magnus.word(g.to_letters(u)) == magnus.word(w)


@pytest.mark.parametrize("d, c", SMALL)
def test_associativity(d, c):
    rng = random.Random(7 * d + c)
    g = free_nilpotent_group(d, c)
    for _ in range(500):
        a, b, x = (g.collect(_random_word(rng, d, rng.randint(0, 6))) for _ in range(3))
        assert g.multiply(g.multiply(a, b), x) == g.multiply(a, g.multiply(b, x))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([1, 2, 3, -1, -2, -3]), max_size=10),
       st.lists(st.sampled_from([1, 2, 3, -1, -2, -3]), max_size=10))
def test_collect_is_homomorphism(w1, w2):
    g = free_nilpotent_group(3, 3)
    u = g.collect(w1 + w2)
    assert u == g.multiply(g.collect(w1), g.collect(w2))
    assert g.multiply(u, inverse(u)).is_identity()


@pytest.mark.parametrize("d, c", [(2, 4), (3, 3)])
def test_class_truncation(d, c):
    g = free_nilpotent_group(d, c)
    rng = random.Random(d * c)
    strata = {k: [i for i, w in enumerate(g.weights) if w == k] for k in range(1, c + 1)}
    for k in range(1, c + 1):
        for m in range(1, c + 1):
            for _ in range(5):
                u = g.generator(rng.choice(strata[k]))
                v = g.generator(rng.choice(strata[m]))
                got = g.commutator(u, v)
                if k + m > c:
                    assert got.is_identity()
                else:
                    assert min(g.stratum_weights(got.exponents), default=k + m) >= k + m


def test_quotient_rank_values():
    assert quotient_rank(2, 2, 1) == 1
    assert quotient_rank(3, 1, 3) == 14


@pytest.mark.parametrize("d, c", [(2, 3), (2, 4), (3, 3)])
def test_strata_are_free_abelian(d, c):
    for n in range(1, c + 1):
        rank, divisors = stratum_quotient(d, n, c + 1 - n)
        assert rank == quotient_rank(d, n, c + 1 - n)
        assert divisors == []


@pytest.mark.parametrize("d, n", [(2, 4), (3, 3), (2, 5)])
def test_basic_commutators_independent_in_lie_algebra(d, n):
    # leading Lie polynomials of the weight-n basic commutators are linearly independent
    polys = [Magnus.lie_polynomial(_tree(b)) for b in hall_basis(d, n) if b.weight == n]
    monos = sorted({w for p in polys for w in p})
    mat = Matrix([[p.get(w, 0) for w in monos] for p in polys])
    assert mat.rank() == witt(n, d) == len(polys)


def test_expand_and_parse():
    b = [x for x in hall_basis(2, 2) if x.weight == 2][0]
    assert expand_commutator(b) == [-2, -1, 2, 1]
    assert parse_word("x2 x1^-1") == [2, -1]
    assert parse_word("x2*x1^2") == [2, 1, 1]
    assert parse_word("2,1,-1") == [2, 1, -1]
    with pytest.raises(ValueError):
        parse_word("y3")
