import pytest
from hypothesis import given, strategies as st

from nilmult.caps import CapExceeded
from nilmult.witt_hall import _hall_basis, hall_basis, mobius, stratum_counts, witt, witt_table

from oracles import brute_force_hall_counts


def test_mobius_values():
    assert [mobius(m) for m in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


def test_mobius_rejects_zero():
    with pytest.raises(ValueError):
        mobius(0)


def test_mobius_sum_over_divisors():
    for n in range(1, 1001):
        total = sum(mobius(m) for m in range(1, n + 1) if n % m == 0)
        assert total == (1 if n == 1 else 0)


def test_witt_fixed_values():
    assert witt(3, 3) == 8
    assert witt(6, 2) == 9
    assert witt(4, 2) == 3
    assert witt(5, 2) == 6


@pytest.mark.parametrize("n, d", [(0, 2), (2, 0)])
def test_witt_rejects_zero(n, d):
    with pytest.raises(ValueError):
        witt(n, d)


def test_witt_one_letter_and_weight_two():
    assert all(witt(n, 1) == 0 for n in range(2, 40))
    assert all(witt(1, d) == d for d in range(1, 50))
    assert all(witt(2, d) == d * (d - 1) // 2 for d in range(1, 51))


def test_witt_is_exact_for_large_arguments():
    # necklace count: n * witt(n, d) = sum mu(m) d^(n/m)
    n, d = 30, 97
    total = sum(mobius(m) * d ** (n // m) for m in range(1, n + 1) if n % m == 0)
    assert witt(n, d) * n == total


def test_basis_small_cases():
    assert [str(b) for b in hall_basis(2, 2)] == ["x1", "x2", "[x2,x1]"]
    assert [str(b) for b in hall_basis(1, 3)] == ["x1"]
    weight3 = [str(b) for b in hall_basis(2, 3) if b.weight == 3]
    assert sorted(weight3) == ["[[x2,x1],x1]", "[[x2,x1],x2]"]


@pytest.mark.parametrize("d", range(1, 5))
def test_stratum_counts_match_witt(d):
    counts = stratum_counts(hall_basis(d, 6))
    for n in range(1, 7):
        assert counts.get(n, 0) == witt(n, d)


@pytest.mark.parametrize("d, w", [(2, 6), (3, 5), (4, 4)])
def test_counts_match_brute_force_rules(d, w):
    brute = brute_force_hall_counts(d, w)
    counts = stratum_counts(hall_basis(d, w))
    assert all(counts.get(k, 0) == brute[k] for k in range(1, w + 1))


def test_basis_satisfies_hall_rules():
    basis = hall_basis(3, 5)
    assert [b.order_index for b in basis] == list(range(len(basis)))
    weights = [b.weight for b in basis]
    assert weights == sorted(weights)
    for b in basis:
        if b.is_letter:
            continue
        assert b.weight == b.left.weight + b.right.weight
        assert b.left.order_index > b.right.order_index
        if not b.left.is_letter:
            assert b.right.order_index >= b.left.right.order_index


def test_basis_is_deterministic():
    a = [(b.order_index, str(b)) for b in hall_basis(3, 4)]
    _hall_basis.cache_clear()
    b = [(b.order_index, str(b)) for b in hall_basis(3, 4)]
    assert a == b


def test_basis_rejects_zero_and_respects_cap(monkeypatch):
    with pytest.raises(ValueError):
        hall_basis(0, 3)
    monkeypatch.setenv("NILMULT_CAPS", "basis_size=10")
    with pytest.raises(CapExceeded):
        hall_basis(3, 4)


def test_witt_table():
    table = witt_table(4, 3)
    assert table[(3, 3)] == 8 and table[(1, 2)] == 2 and len(table) == 12


@given(st.integers(1, 12), st.integers(1, 9))
def test_witt_is_nonnegative_integer(n, d):
    assert witt(n, d) >= 0
