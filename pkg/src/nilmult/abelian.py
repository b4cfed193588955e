"""Finite abelian groups in invariant-factor form.

Invariants are stored largest first, each dividing the one before it, with
no entry equal to 1.  The empty tuple is the trivial group.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd, prod
from typing import Iterable

from nilmult._arith import factorize


@dataclass(frozen=True)
class AbelianGroup:
    invariants: tuple[int, ...] = ()

    def __post_init__(self):
        inv = tuple(int(n) for n in self.invariants)
        object.__setattr__(self, "invariants", inv)
        if any(n < 2 for n in inv):
            raise ValueError(f"invariant factors must be >= 2: {inv}")
        for a, b in zip(inv, inv[1:]):
            if a % b:
                raise ValueError(f"invariants {inv} do not form a divisibility chain; use canonicalize()")

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return canonicalize([n])

    @classmethod
    def elementary(cls, p: int, d: int) -> "AbelianGroup":
        return cls((p,) * d)

    @property
    def order(self) -> int:
        return prod(self.invariants)

    @property
    def exponent(self) -> int:
        return self.invariants[0] if self.invariants else 1

    @property
    def rank(self) -> int:
        """Minimal number of generators."""
        return len(self.invariants)

    def is_trivial(self) -> bool:
        return not self.invariants

    def __str__(self) -> str:
        if not self.invariants:
            return "trivial"
        return " + ".join(f"Z{n}" for n in self.invariants)


def order(a: AbelianGroup) -> int:
    return a.order


def exponent(a: AbelianGroup) -> int:
    return a.exponent


def rank(a: AbelianGroup) -> int:
    return a.rank


def primary_parts(cyclic_orders: Iterable[int]) -> dict[int, list[int]]:
    """Exponents of the prime-power cyclic factors, per prime, largest first."""
    parts: dict[int, list[int]] = {}
    for m in cyclic_orders:
        if m < 1:
            raise ValueError(f"cyclic orders must be >= 1, got {m}")
        for p, e in factorize(m).items():
            parts.setdefault(p, []).append(e)
    for exps in parts.values():
        exps.sort(reverse=True)
    return parts


def from_primary(parts: dict[int, list[int]]) -> AbelianGroup:
    length = max((len(v) for v in parts.values()), default=0)
    inv = []
    for j in range(length):
        inv.append(prod(p**exps[j] for p, exps in parts.items() if j < len(exps)))
    return AbelianGroup(tuple(inv))


def canonicalize(cyclic_orders: Iterable[int]) -> AbelianGroup:
    """Invariant-factor form of the direct sum of cyclic groups of the given orders."""
    return from_primary(primary_parts(list(cyclic_orders)))


def direct_sum(a: AbelianGroup, b: AbelianGroup) -> AbelianGroup:
    return canonicalize(a.invariants + b.invariants)


def tensor(a: AbelianGroup, b: AbelianGroup) -> AbelianGroup:
    # Z_m (x) Z_n = Z_gcd(m, n), distributed over the cyclic factors
    return canonicalize([gcd(m, n) for m in a.invariants for n in b.invariants])


def tensor_power(b: AbelianGroup, a: AbelianGroup, c: int) -> AbelianGroup:
    """``b (x) a (x) ... (x) a`` with exactly ``c`` copies of ``a``."""
    if c < 1:
        raise ValueError(f"tensor_power needs c >= 1, got {c}")
    return reduce(tensor, [a] * c, b)


def power_sum(a: AbelianGroup, times: int) -> AbelianGroup:
    """Direct sum of ``times`` copies of ``a``."""
    if times < 0:
        raise ValueError("negative multiplicity")
    return canonicalize(a.invariants * times)
