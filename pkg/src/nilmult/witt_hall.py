"""Möbius function, Witt's count of basic commutators, and Hall bases.

Basic commutators are generated weight by weight.  A bracket ``[a, b]`` of
weight ``k`` is basic when ``a > b`` in the running order and, if ``a`` is
itself ``[s, t]``, also ``b >= t``.  Inside one weight the order is fixed as
(order index of right part, order index of left part); letters are ordered by
their index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from nilmult._arith import divisors, factorize
from nilmult.caps import check_cap


def mobius(m: int) -> int:
    if m < 1:
        raise ValueError(f"mobius is defined for m >= 1, got {m}")
    exps = factorize(m).values()
    if any(e > 1 for e in exps):
        return 0
    return -1 if len(exps) % 2 else 1


@lru_cache(maxsize=None)
def witt(n: int, d: int) -> int:
    """Number of basic commutators of weight ``n`` on ``d`` letters.

    Exact integer arithmetic; the final division by ``n`` is checked.
    """
    if n < 1 or d < 1:
        raise ValueError(f"witt needs n >= 1 and d >= 1, got n={n}, d={d}")
    total = sum(mobius(m) * d ** (n // m) for m in divisors(n))
    count, rem = divmod(total, n)
    if rem:
        raise ArithmeticError(f"Witt sum {total} not divisible by {n}")
    return count


@dataclass(frozen=True)
class BasicCommutator:
    """Either a letter (``letter`` set) or a bracket of two earlier commutators."""

    weight: int
    order_index: int
    letter: Optional[int] = None
    left: Optional["BasicCommutator"] = field(default=None, repr=False)
    right: Optional["BasicCommutator"] = field(default=None, repr=False)

    @property
    def is_letter(self) -> bool:
        return self.letter is not None

    def __str__(self) -> str:
        if self.is_letter:
            return f"x{self.letter}"
        return f"[{self.left},{self.right}]"

    def letters(self) -> list[int]:
        """Letter indices read left to right (the foliage)."""
        if self.is_letter:
            return [self.letter]
        return self.left.letters() + self.right.letters()


def hall_basis(d: int, max_weight: int) -> list[BasicCommutator]:
    """All basic commutators of weight <= ``max_weight`` on ``x1..xd``, in order."""
    if d < 1 or max_weight < 1:
        raise ValueError(f"hall_basis needs d >= 1 and max_weight >= 1, got {d}, {max_weight}")
    check_cap("basis_size", sum(witt(n, d) for n in range(1, max_weight + 1)))
    return list(_hall_basis(d, max_weight))


@lru_cache(maxsize=32)
def _hall_basis(d: int, max_weight: int) -> tuple[BasicCommutator, ...]:
    basis = [BasicCommutator(weight=1, order_index=i, letter=i + 1) for i in range(d)]
    by_weight: dict[int, list[BasicCommutator]] = {1: list(basis)}
    for k in range(2, max_weight + 1):
        candidates = []
        for wl in range(1, k):
            for a in by_weight[wl]:
                for b in by_weight[k - wl]:
                    if a.order_index <= b.order_index:
                        continue
                    if not a.is_letter and b.order_index < a.right.order_index:
                        continue
                    candidates.append((b.order_index, a.order_index, a, b))
        candidates.sort(key=lambda item: (item[0], item[1]))
        stratum = []
        for _, _, a, b in candidates:
            stratum.append(BasicCommutator(weight=k, order_index=len(basis), left=a, right=b))
            basis.append(stratum[-1])
        by_weight[k] = stratum
    return tuple(basis)


def stratum_counts(basis: list[BasicCommutator]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for b in basis:
        counts[b.weight] = counts.get(b.weight, 0) + 1
    return counts


def witt_table(max_weight: int, max_letters: int) -> dict[tuple[int, int], int]:
    return {(n, d): witt(n, d) for n in range(1, max_weight + 1) for d in range(1, max_letters + 1)}
