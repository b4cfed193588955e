"""c-nilpotent multipliers where an exact value is available.

Abelian groups are handled by the closed formula over invariant factors.
Nonabelian groups go through a small registry keyed by recognisers that
pin down the isomorphism type from cheap invariants (order, element-order
census, exponent).  Anything else is reported as unknown.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Optional, Union

from nilmult._arith import prime_power
from nilmult.abelian import AbelianGroup, canonicalize
from nilmult.group_engine import FiniteGroup
from nilmult.witt_hall import witt

GroupLike = Union[FiniteGroup, AbelianGroup]

D8_FORMULA = "Moghaddam's D8 formula: Z4 + Z2^(chi_{c+1}(2)-1)"
ABELIAN_FORMULA = "abelian formula: Z_{n_j} repeated chi_{c+1}(j) - chi_{c+1}(j-1) times, j >= 2"


def chi(n: int, d: int) -> int:
    """Witt count with the conventions used by the bounds: chi_n(0) = 0."""
    return 0 if d == 0 else witt(n, d)


@dataclass(frozen=True)
class MultiplierQuery:
    group: GroupLike
    c: int

    def __post_init__(self):
        if self.c < 1:
            raise ValueError(f"c must be >= 1, got {self.c}")


@dataclass(frozen=True)
class KnownMultiplier:
    value: AbelianGroup
    provenance: str

    def __post_init__(self):
        if not self.provenance:
            raise ValueError("a known multiplier needs a provenance")

    def __str__(self) -> str:
        return f"{self.value} (provenance: {self.provenance})"


def abelian_multiplier(g: AbelianGroup, c: int) -> AbelianGroup:
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    inv = g.invariants
    parts: list[int] = []
    for j in range(2, len(inv) + 1):
        parts += [inv[j - 1]] * (witt(c + 1, j) - witt(c + 1, j - 1))
    return canonicalize(parts)


def dihedral8_multiplier(c: int) -> AbelianGroup:
    if c < 1:
        raise ValueError(f"c must be >= 1, got {c}")
    return canonicalize([4] + [2] * (witt(c + 1, 2) - 1))


# -- recognisers -----------------------------------------------------------------


def _census(g: FiniteGroup) -> Counter:
    return Counter(g.element_orders())


def is_dihedral(g: FiniteGroup) -> Optional[int]:
    """n if g is dihedral of order 2n (n >= 3), else None.

    A group of order 2n with an element r of order n such that every element
    outside <r> is an involution is dihedral.
    """
    if g.order < 6 or g.order % 2:
        return None
    n = g.order // 2
    orders = g.element_orders()
    r = next((x for x in range(g.order) if orders[x] == n), None)
    if r is None:
        return None
    rot = g.closure([r])
    if all(orders[x] == 2 for x in range(g.order) if x not in rot):
        return n
    return None


def is_d8(g: FiniteGroup) -> bool:
    return g.order == 8 and not g.is_abelian() and _census(g)[2] == 5


def is_q8(g: FiniteGroup) -> bool:
    return g.order == 8 and not g.is_abelian() and _census(g)[2] == 1


def odd_extraspecial(g: FiniteGroup) -> Optional[tuple[int, bool]]:
    """(p, exponent-p?) for a nonabelian group of order p^3 with p odd."""
    pp = prime_power(g.order)
    if pp is None or pp[1] != 3 or pp[0] == 2 or g.is_abelian():
        return None
    p = pp[0]
    return p, g.exponent == p


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    recognise: Callable[[FiniteGroup], bool]
    value: Callable[[FiniteGroup, int], Optional[AbelianGroup]]
    provenance: Callable[[int], str]


def _dihedral_value(g: FiniteGroup, c: int) -> Optional[AbelianGroup]:
    n = is_dihedral(g)
    if c == 1:
        return canonicalize([2] if n % 2 == 0 else [])
    if n == 4:
        return dihedral8_multiplier(c)
    return None


def _dihedral_provenance(c: int) -> str:
    return "classical Schur multiplier of dihedral groups" if c == 1 else D8_FORMULA


def _odd_es_value(g: FiniteGroup, c: int) -> Optional[AbelianGroup]:
    p, exp_p = odd_extraspecial(g)
    if c != 1:
        return None
    return canonicalize([p, p]) if exp_p else canonicalize([])


REGISTRY: list[RegistryEntry] = [
    RegistryEntry("dihedral", lambda g: is_dihedral(g) is not None, _dihedral_value, _dihedral_provenance),
    RegistryEntry("Q8", is_q8, lambda g, c: canonicalize([]) if c == 1 else None,
                  lambda c: "classical Schur multiplier of Q8"),
    RegistryEntry("extraspecial p^3, p odd", lambda g: odd_extraspecial(g) is not None, _odd_es_value,
                  lambda c: "classical Schur multiplier of nonabelian groups of order p^3"),
]


def known_multiplier(q: MultiplierQuery, *, d8_formula_at_c1: bool = False) -> Optional[KnownMultiplier]:
    """Exact M^(c)(G) when available, else None.

    Abelian inputs (abelian form or commutative table) use the abelian
    formula.  D8 at c = 1 gives the classical Z2; passing
    ``d8_formula_at_c1=True`` applies the c >= 2 D8 formula there instead,
    which yields Z4.
    """
    g, c = q.group, q.c
    if isinstance(g, AbelianGroup):
        return KnownMultiplier(abelian_multiplier(g, c), ABELIAN_FORMULA)
    if g.is_abelian():
        return KnownMultiplier(abelian_multiplier(g.abelian_invariants(), c), ABELIAN_FORMULA)
    if d8_formula_at_c1 and c == 1 and is_d8(g):
        return KnownMultiplier(dihedral8_multiplier(1), D8_FORMULA + " [evaluated at c=1 by override]")
    for entry in REGISTRY:
        if entry.recognise(g):
            value = entry.value(g, c)
            if value is not None:
                return KnownMultiplier(value, entry.provenance(c))
    return None
