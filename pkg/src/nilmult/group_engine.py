"""Small finite groups given by multiplication tables.

Elements are integer indices into ``labels``; ``table[i][j]`` is the index of
``labels[i] * labels[j]``.  Subgroups are frozensets of element indices.
Commutators follow ``[a, b] = a^-1 b^-1 a b`` and iterate left-normed.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

import numpy as np

from nilmult._arith import factorize, prime_power
from nilmult.abelian import AbelianGroup, canonicalize, from_primary
from nilmult.caps import CapExceeded, check_cap, get_cap

Subgroup = frozenset

ASSOC_EXHAUSTIVE_LIMIT = 256
ASSOC_SAMPLES = 10**5
ASSOC_SEED = 20240917


class GroupError(ValueError):
    """Malformed group data: not a Latin square, not associative, bad subgroup."""


class FiniteGroup:
    def __init__(self, labels: Sequence[str], table: Sequence[Sequence[int]], *, name: str = "", check: bool = True):
        self.labels = [str(x) for x in labels]
        self.table = [list(map(int, row)) for row in table]
        self.name = name
        n = len(self.labels)
        if n == 0:
            raise GroupError("a group needs at least one element")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise GroupError(f"table must be {n}x{n}")
        if check:
            self._validate()
        self.identity = self._find_identity()
        e = self.identity
        self.inverses = [row.index(e) for row in self.table]
        self._lock = threading.Lock()
        self._analysis: Optional[GroupAnalysis] = None
        self._orders: Optional[list[int]] = None
        self._comm: Optional[np.ndarray] = None
        self._array: Optional[np.ndarray] = None

    # -- construction checks -------------------------------------------------

    def _validate(self) -> None:
        n = len(self.labels)
        arr = np.asarray(self.table, dtype=np.int64)
        if arr.min() < 0 or arr.max() >= n:
            raise GroupError("table entries out of range")
        full = np.arange(n)
        for row in arr:
            if not np.array_equal(np.sort(row), full):
                raise GroupError("table is not a Latin square (row)")
        for col in arr.T:
            if not np.array_equal(np.sort(col), full):
                raise GroupError("table is not a Latin square (column)")
        ids = [i for i in range(n) if np.array_equal(arr[i], full) and np.array_equal(arr[:, i], full)]
        if not ids:
            raise GroupError("no identity element")
        if n <= ASSOC_EXHAUSTIVE_LIMIT:
            for a in range(n):
                # (a b) c == a (b c) for all b, c
                if not np.array_equal(arr[arr[a]], arr[a][arr]):
                    raise GroupError("table is not associative")
        else:
            rng = np.random.default_rng(ASSOC_SEED)
            a, b, c = rng.integers(0, n, size=(3, ASSOC_SAMPLES))
            if not np.array_equal(arr[arr[a, b], c], arr[a, arr[b, c]]):
                raise GroupError("table is not associative (sampled)")

    def _find_identity(self) -> int:
        n = len(self.labels)
        for i in range(n):
            if self.table[i] == list(range(n)):
                return i
        raise GroupError("no identity element")

    # -- element arithmetic --------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'unnamed'}, order={self.order})"

    @property
    def elements(self) -> Subgroup:
        return frozenset(range(self.order))

    @property
    def trivial(self) -> Subgroup:
        return frozenset([self.identity])

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverses[a], -k
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def comm(self, a: int, b: int) -> int:
        t, iv = self.table, self.inverses
        return t[t[iv[a]][iv[b]]][t[a][b]]

    def conj(self, a: int, b: int) -> int:
        """``b^-1 a b``."""
        t = self.table
        return t[t[self.inverses[b]][a]][b]

    def element_orders(self) -> list[int]:
        if self._orders is None:
            out = []
            e = self.identity
            for x in range(self.order):
                k, y = 1, x
                while y != e:
                    y = self.table[y][x]
                    k += 1
                out.append(k)
            self._orders = out
        return self._orders

    def element_order(self, a: int) -> int:
        return self.element_orders()[a]

    def array(self) -> np.ndarray:
        if self._array is None:
            self._array = np.asarray(self.table, dtype=np.int64)
        return self._array

    def commutator_table(self) -> np.ndarray:
        if self._comm is None:
            t = self.array()
            iv = np.asarray(self.inverses, dtype=np.int64)
            self._comm = t[t[iv][:, iv], t]
        return self._comm

    # -- subgroups -----------------------------------------------------------

    def closure(self, gens: Iterable[int]) -> Subgroup:
        """Subgroup generated by ``gens``."""
        gens = list(dict.fromkeys(gens))
        seen = {self.identity}
        frontier = [self.identity]
        t = self.table
        while frontier:
            nxt = []
            for x in frontier:
                row = t[x]
                for g in gens:
                    y = row[g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def is_subgroup(self, s: Iterable[int]) -> bool:
        s = frozenset(s)
        if self.identity not in s:
            return False
        if len(s) == self.order:
            return True
        arr = self.array()
        idx = np.fromiter(s, dtype=np.int64)
        mask = np.zeros(self.order, dtype=bool)
        mask[idx] = True
        return bool(mask[arr[np.ix_(idx, idx)]].all())

    def _require_subgroup(self, s: Iterable[int], what: str = "input") -> Subgroup:
        s = frozenset(s)
        if not self.is_subgroup(s):
            raise GroupError(f"{what} is not closed under multiplication")
        return s

    def is_normal(self, n: Iterable[int]) -> bool:
        n = frozenset(n)
        if not self.is_subgroup(n):
            return False
        arr, iv = self.array(), np.asarray(self.inverses)
        idx = np.fromiter(n, dtype=np.int64)
        mask = np.zeros(self.order, dtype=bool)
        mask[idx] = True
        # g^-1 x g for every g and x in n
        conj = arr[arr[iv][:, idx], np.arange(self.order)[:, None]]
        return bool(mask[conj].all())

    def commutator_subgroup(self, m: Iterable[int], n: Iterable[int]) -> Subgroup:
        """Subgroup generated by all ``[x, y]`` with ``x`` in ``m`` and ``y`` in ``n``."""
        m = self._require_subgroup(m, "first argument")
        n = self._require_subgroup(n, "second argument")
        ct = self.commutator_table()
        mi = np.fromiter(sorted(m), dtype=np.int64)
        ni = np.fromiter(sorted(n), dtype=np.int64)
        comms = np.unique(ct[np.ix_(mi, ni)])
        return self.closure(comms.tolist())

    def iterated_commutator(self, m: Iterable[int], n: Iterable[int], times: int) -> Subgroup:
        """``[m, n, ..., n]`` with ``times`` copies of ``n`` (left-normed)."""
        out = frozenset(m)
        for _ in range(times):
            out = self.commutator_subgroup(out, n)
        return out

    def centralizer(self, s: Iterable[int]) -> Subgroup:
        s = list(s)
        t = self.table
        return frozenset(g for g in range(self.order) if all(t[g][x] == t[x][g] for x in s))

    def center(self) -> Subgroup:
        return self.centralizer(range(self.order))

    def is_abelian(self) -> bool:
        return len(self.center()) == self.order

    def lower_central_series(self, sub: Optional[Iterable[int]] = None) -> list[Subgroup]:
        """``gamma_1 = H``, ``gamma_{j+1} = [gamma_j, H]`` until it stabilises (H = G by default)."""
        h = self.elements if sub is None else self._require_subgroup(sub)
        series = [h]
        while True:
            nxt = self.commutator_subgroup(series[-1], h)
            if nxt == series[-1]:
                return series
            series.append(nxt)

    def upper_central_series(self) -> list[Subgroup]:
        ct = self.commutator_table()
        series = [self.trivial]
        while True:
            z = series[-1]
            mask = np.zeros(self.order, dtype=bool)
            mask[list(z)] = True
            # g lies in the next term iff every [g, x] lies in the current one
            nxt = frozenset(np.nonzero(mask[ct].all(axis=1))[0].tolist())
            if nxt == z:
                return series
            series.append(nxt)

    def derived_subgroup(self) -> Subgroup:
        return self.commutator_subgroup(self.elements, self.elements)

    def subgroup_exponent(self, s: Iterable[int]) -> int:
        orders = self.element_orders()
        return reduce(lcm, (orders[x] for x in s), 1)

    @property
    def exponent(self) -> int:
        return self.subgroup_exponent(range(self.order))

    def cyclic_subgroups(self) -> dict[Subgroup, int]:
        """Each cyclic subgroup mapped to one generator."""
        out: dict[Subgroup, int] = {}
        for x in range(self.order):
            c = self.closure([x])
            out.setdefault(c, x)
        return out

    def subgroups(self) -> list[Subgroup]:
        """All subgroups, by joining cyclic subgroups until nothing new appears."""
        check_cap("special_rank", self.order)
        cyc = self.cyclic_subgroups()
        cyc_items = sorted(cyc.items(), key=lambda kv: (len(kv[0]), kv[1]))
        found: dict[Subgroup, list[int]] = {c: [g] for c, g in cyc_items}
        queue = list(found)
        while queue:
            h = queue.pop()
            gens = found[h]
            for c, g in cyc_items:
                if g in h:
                    continue
                j = self.closure(gens + [g])
                if j not in found:
                    found[j] = gens + [g]
                    queue.append(j)
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def normal_subgroups(self) -> list[Subgroup]:
        return [s for s in self.subgroups() if self.is_normal(s)]

    # -- derived groups ------------------------------------------------------

    def subgroup_as_group(self, s: Iterable[int], name: str = "") -> "FiniteGroup":
        s = sorted(self._require_subgroup(s))
        pos = {x: i for i, x in enumerate(s)}
        table = [[pos[self.table[a][b]] for b in s] for a in s]
        return FiniteGroup([self.labels[x] for x in s], table, name=name, check=False)

    def cosets(self, n: Iterable[int]) -> tuple[list[int], list[int]]:
        """(coset id of each element, representative of each coset); identity coset is 0."""
        n = sorted(n)
        coset_of = [-1] * self.order
        reps = []
        for g in [self.identity] + [x for x in range(self.order) if x != self.identity]:
            if coset_of[g] >= 0:
                continue
            cid = len(reps)
            reps.append(g)
            for h in n:
                coset_of[self.table[g][h]] = cid
        return coset_of, reps

    def quotient(self, n: Iterable[int], name: str = "") -> "FiniteGroup":
        n = frozenset(n)
        if not self.is_normal(n):
            raise GroupError("quotient by a subgroup that is not normal")
        coset_of, reps = self.cosets(n)
        table = [[coset_of[self.table[a][b]] for b in reps] for a in reps]
        labels = [self.labels[r] if len(n) == 1 else f"{self.labels[r]}N" for r in reps]
        return FiniteGroup(labels, table, name=name, check=False)

    def abelian_invariants(self) -> AbelianGroup:
        """Invariant factors of an abelian table group, from its element-order census."""
        if not self.is_abelian():
            raise GroupError("abelian_invariants needs an abelian group")
        orders = self.element_orders()
        parts: dict[int, list[int]] = {}
        for p, top in factorize(self.order).items():
            # s_j = log_p #{x : x^(p^j) = 1}; s_j - s_{j-1} cyclic factors have exponent >= j
            s = [0]
            for j in range(1, top + 1):
                count = sum(1 for o in orders if o <= p**j and (p**j) % o == 0)
                s.append(_exact_log(count, p))
            at_least = [s[j] - s[j - 1] for j in range(1, top + 1)]
            exps = []
            for j in range(top, 0, -1):
                prev = at_least[j] if j < top else 0
                exps += [j] * (at_least[j - 1] - prev)
            parts[p] = sorted(exps, reverse=True)
        return from_primary(parts)

    def abelianization(self) -> AbelianGroup:
        return self.quotient(self.derived_subgroup()).abelian_invariants()

    # -- generator counts ----------------------------------------------------

    def prime(self) -> Optional[int]:
        """The prime p if this is a nontrivial p-group, else None."""
        pp = prime_power(self.order)
        if pp is None or pp[1] == 0:
            return None
        return pp[0]

    def frattini(self) -> Subgroup:
        """For a p-group: the subgroup generated by p-th powers and commutators."""
        p = self.prime()
        if p is None:
            raise GroupError("frattini() is implemented for p-groups only")
        gens = {self.power(x, p) for x in range(self.order)}
        gens |= set(self.derived_subgroup())
        return self.closure(gens)

    def min_generators(self) -> int:
        if self.order == 1:
            return 0
        p = self.prime()
        if p is not None:
            return _exact_log(self.order // len(self.frattini()), p)
        return self.min_generators_search()

    def min_generators_search(self) -> int:
        """Smallest k such that some k elements generate the group, by exhaustive search."""
        check_cap("min_generators", self.order)
        if self.order == 1:
            return 0
        reps = sorted(self.cyclic_subgroups().values())
        full = self.order
        for k in itertools.count(1):
            for combo in itertools.combinations(reps, k):
                if len(self.closure(combo)) == full:
                    return k

    def special_rank(self) -> int:
        """Largest minimal generator count over all subgroups."""
        if self.is_abelian():
            return self.min_generators()
        check_cap("special_rank", self.order)
        return max(self.subgroup_as_group(s).min_generators() for s in self.subgroups())

    def special_rank_search(self) -> int:
        check_cap("special_rank", self.order)
        return max(self.subgroup_as_group(s).min_generators() for s in self.subgroups())

    # -- cached analysis -----------------------------------------------------

    def analysis(self) -> "GroupAnalysis":
        with self._lock:
            if self._analysis is None:
                self._analysis = GroupAnalysis.compute(self)
            return self._analysis


def _exact_log(value: int, p: int) -> int:
    k = 0
    while value > 1:
        if value % p:
            raise ArithmeticError(f"{value} is not a power of {p}")
        value //= p
        k += 1
    return k


@dataclass(frozen=True)
class GroupAnalysis:
    """Structural data of a group, computed once.

    ``class_t`` is None for non-nilpotent groups, ``special_rank`` is None when
    the subgroup enumeration cap was exceeded, ``p`` is None unless the group
    is a nontrivial p-group.
    """

    order: int
    lower_central: tuple[Subgroup, ...]
    upper_central: tuple[Subgroup, ...]
    class_t: Optional[int]
    exponent: int
    d: int
    special_rank: Optional[int]
    p: Optional[int]
    abelian: bool

    @property
    def nilpotent(self) -> bool:
        return self.class_t is not None

    @property
    def n(self) -> Optional[int]:
        """log_p |G| for p-groups."""
        return None if self.p is None else _exact_log(self.order, self.p)

    @property
    def e(self) -> Optional[int]:
        """log_p exp(G) for p-groups."""
        return None if self.p is None else _exact_log(self.exponent, self.p)

    def gamma(self, j: int) -> Subgroup:
        """gamma_j(G) for j >= 1; terms past the end of the series repeat the last one."""
        if j < 1:
            raise ValueError("gamma_j needs j >= 1")
        return self.lower_central[min(j, len(self.lower_central)) - 1]

    def zeta(self, j: int) -> Subgroup:
        """Z_j(G) for j >= 0."""
        return self.upper_central[min(j, len(self.upper_central) - 1)]

    @classmethod
    def compute(cls, g: FiniteGroup) -> "GroupAnalysis":
        lower = g.lower_central_series()
        upper = g.upper_central_series()
        nilpotent = len(lower[-1]) == 1
        if g.order == 1:
            class_t = 0
        elif nilpotent:
            class_t = len(lower) - 1
        else:
            class_t = None
        try:
            r = g.special_rank()
        except CapExceeded:
            r = None
        return cls(
            order=g.order,
            lower_central=tuple(lower),
            upper_central=tuple(upper),
            class_t=class_t,
            exponent=g.exponent,
            d=g.min_generators(),
            special_rank=r,
            p=g.prime(),
            abelian=g.is_abelian(),
        )


# -- constructors ------------------------------------------------------------


def cycles_to_images(degree: int, cycles: Sequence[Sequence[int]]) -> list[int]:
    """1-based image list of a permutation given as disjoint cycles."""
    img = list(range(1, degree + 1))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a - 1] = b
    return img


def _cycle_label(perm: tuple[int, ...]) -> str:
    seen, parts = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x + 1)
            x = perm[x]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def from_permutations(degree: int, generators: Sequence[Sequence[int]], *, name: str = "") -> FiniteGroup:
    """Group generated by permutations given as 1-based image lists.

    The product ``x * y`` applies ``x`` first, then ``y``.  Identity is index 0.
    """
    if degree < 1:
        raise GroupError("degree must be positive")
    gens = []
    for img in generators:
        perm = tuple(int(v) - 1 for v in img)
        if len(perm) != degree or sorted(perm) != list(range(degree)):
            raise GroupError(f"not a permutation of 1..{degree}: {list(img)}")
        gens.append(perm)
    limit = get_cap("closure")
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[x[i]] for i in range(degree))
                if y not in index:
                    index[y] = len(elems)
                    elems.append(y)
                    nxt.append(y)
                    if len(elems) > limit:
                        raise CapExceeded("closure", len(elems), limit)
        frontier = nxt
    table = [[index[tuple(b[a[i]] for i in range(degree))] for b in elems] for a in elems]
    return FiniteGroup([_cycle_label(p) for p in elems], table, name=name, check=False)


def from_product_rule(elements: Sequence, rule, *, name: str = "", label=str, check: bool = True) -> FiniteGroup:
    check_cap("closure", len(elements))
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[rule(a, b)] for b in elements] for a in elements]
    return FiniteGroup([label(x) for x in elements], table, name=name, check=check)


def abelian_table(invariants: Sequence[int], *, name: str = "") -> FiniteGroup:
    inv = list(invariants)
    elements = list(itertools.product(*[range(n) for n in inv])) if inv else [()]
    rule = lambda a, b: tuple((x + y) % n for x, y, n in zip(a, b, inv))
    return from_product_rule(elements, rule, name=name or _abelian_name(inv), check=False)


def _abelian_name(inv: Sequence[int]) -> str:
    return "x".join(f"Z{n}" for n in inv) or "trivial"


def cyclic(n: int) -> FiniteGroup:
    return abelian_table([n] if n > 1 else [], name=f"C{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n`` (symmetries of an n-gon)."""
    elements = [(s, k) for s in (0, 1) for k in range(n)]

    def rule(a, b):
        # r^k s^a, elements written s^s r^k
        s1, k1 = a
        s2, k2 = b
        return ((s1 + s2) % 2, ((-k1 if s2 else k1) + k2) % n)

    labels = lambda x: ("s" if x[0] else "") + (f"r{x[1]}" if x[1] else ("" if x[0] else "e"))
    return from_product_rule(elements, rule, name=f"D{2 * n}", label=labels)


def quaternion() -> FiniteGroup:
    # unit quaternions +-1, +-i, +-j, +-k as (sign, unit)
    mult = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elements = [(s, u) for s in (1, -1) for u in "1ijk"]

    def rule(a, b):
        s, u = mult[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    label = lambda x: ("-" if x[0] < 0 else "") + x[1]
    return from_product_rule(elements, rule, name="Q8", label=label)


def extraspecial(p: int, exponent_p: bool = True) -> FiniteGroup:
    """Nonabelian group of order p^3: Heisenberg (exponent p) or the exponent-p^2 one.

    For p = 2 the exponent-p flag selects D8 (exponent 4 anyway) vs Q8.
    """
    if p == 2:
        return dihedral(4) if exponent_p else quaternion()
    if exponent_p:
        # upper unitriangular 3x3 matrices over Z_p, stored as (a, b, c)
        elements = list(itertools.product(range(p), repeat=3))
        rule = lambda x, y: ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)
        return from_product_rule(elements, rule, name=f"Heis({p})")
    # <a, b | a^(p^2) = b^p = 1, b^-1 a b = a^(1+p)>, stored as a^i b^j
    q = p * p
    elements = [(i, j) for i in range(q) for j in range(p)]

    def rule(x, y):
        i1, j1 = x
        i2, j2 = y
        # b^j a^i = a^(i (1+p)^j) b^j
        return ((i1 + i2 * pow(1 + p, j1, q)) % q, (j1 + j2) % p)

    return from_product_rule(elements, rule, name=f"M({p}^3)")


def symmetric(n: int) -> FiniteGroup:
    if n < 2:
        return from_permutations(max(n, 1), [], name=f"S{n}")
    gens = [cycles_to_images(n, [list(range(1, n + 1))]), cycles_to_images(n, [[1, 2]])]
    return from_permutations(n, gens, name=f"S{n}")


def direct_product(a: FiniteGroup, b: FiniteGroup, *, name: str = "") -> FiniteGroup:
    elements = [(x, y) for x in range(a.order) for y in range(b.order)]
    rule = lambda u, v: (a.table[u[0]][v[0]], b.table[u[1]][v[1]])
    label = lambda u: f"({a.labels[u[0]]},{b.labels[u[1]]})"
    return from_product_rule(elements, rule, name=name or f"{a.name}x{b.name}", label=label)
