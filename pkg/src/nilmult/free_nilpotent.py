"""Normal forms in the free nilpotent group of class c on d generators.

Every element is written uniquely as ``b_0^e_0 b_1^e_1 ... b_{m-1}^e_{m-1}``
over the Hall basis ``b_i`` of weight <= c, in basis order.  Products are
formed by collection from the left using the conjugation relations
``b_j^(b_i) = b_j * (word in later generators)`` for ``j > i``.

The relations are derived without any external representation: if
``[b_j, b_i]`` is itself basic the relation is immediate, otherwise
``b_j = [b_s, b_t]`` with ``b_t > b_i`` and ``b_j^(b_i) = [b_s^(b_i), b_t^(b_i)]``,
which only needs relations among generators later than ``b_i``.  Processing
``i`` from the top down makes that available.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from nilmult.caps import check_cap
from nilmult.witt_hall import BasicCommutator, hall_basis, witt

Word = list  # list of (generator index, exponent) pairs


@dataclass(frozen=True)
class NilpotentWord:
    """Exponent vector over ``hall_basis(d, c)``; the zero vector is the identity."""

    d: int
    c: int
    exponents: tuple[int, ...]

    @property
    def basis_ref(self) -> tuple[int, int]:
        return (self.d, self.c)

    def is_identity(self) -> bool:
        return not any(self.exponents)

    def support(self) -> dict[int, int]:
        return {i: e for i, e in enumerate(self.exponents) if e}

    def __str__(self) -> str:
        g = free_nilpotent_group(self.d, self.c)
        parts = []
        for i, e in self.support().items():
            name = str(g.basis[i])
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts) or "1"


class FreeNilpotentGroup:
    def __init__(self, d: int, c: int):
        if d < 1 or c < 1:
            raise ValueError(f"need d >= 1 and c >= 1, got d={d}, c={c}")
        check_cap("collect_rank", d)
        check_cap("collect_class", c)
        self.d = d
        self.c = c
        self.basis: list[BasicCommutator] = hall_basis(d, c)
        self.m = len(self.basis)
        self.weights = [b.weight for b in self.basis]
        self._bracket_index = {
            (b.left.order_index, b.right.order_index): b.order_index for b in self.basis if not b.is_letter
        }
        # conj[i][j] / conj_inv[i][j]: normal-form word of b_j conjugated by b_i / b_i^-1;
        # a missing j means b_j commutes with b_i
        self._conj: list[dict[int, Word]] = [{} for _ in range(self.m)]
        self._conj_inv: list[dict[int, Word]] = [{} for _ in range(self.m)]
        self._build_relations()

    # -- presentation ----------------------------------------------------------

    def _build_relations(self) -> None:
        for i in range(self.m - 1, -1, -1):
            wi = self.weights[i]
            for j in range(i + 1, self.m):
                if wi + self.weights[j] > self.c:
                    continue
                bj = self.basis[j]
                if bj.is_letter or bj.right.order_index <= i:
                    k = self._bracket_index[(j, i)]
                    self._conj[i][j] = [(j, 1), (k, 1)]
                else:
                    s, t = bj.left.order_index, bj.right.order_index
                    u = self._conjugate_generator(s, i)
                    v = self._conjugate_generator(t, i)
                    self._conj[i][j] = self._word(self._commutator_vec(u, v))
            # inverse conjugation, top down: if b_j^(b_i) = b_j w then b_j^(b_i^-1) = b_j (w^-1)^(b_i^-1)
            for j in range(self.m - 1, i, -1):
                rel = self._conj[i].get(j)
                if rel is None:
                    continue
                w_inv = self._inverse_vec(self._vec(rel[1:]))
                vec = self._unit(j)
                for g, e in self._word(w_inv):
                    image = self._conj_inv[i].get(g)
                    if image is None:
                        self._mul_gen(vec, g, e)
                    else:
                        self._mul_word(vec, self._power_word(image, e))
                self._conj_inv[i][j] = self._word(vec)

    def _conjugate_generator(self, j: int, i: int) -> list[int]:
        rel = self._conj[i].get(j)
        return self._vec(rel) if rel is not None else self._unit(j)

    # -- exponent-vector arithmetic --------------------------------------------

    def _unit(self, j: int) -> list[int]:
        v = [0] * self.m
        v[j] = 1
        return v

    def _vec(self, word: Iterable[tuple[int, int]]) -> list[int]:
        v = [0] * self.m
        self._mul_word(v, word)
        return v

    @staticmethod
    def _word(vec: Sequence[int]) -> Word:
        return [(i, e) for i, e in enumerate(vec) if e]

    @staticmethod
    def _inverse_word(word: Word) -> Word:
        return [(g, -e) for g, e in reversed(word)]

    def _power_word(self, word: Word, e: int) -> Word:
        base = word if e > 0 else self._inverse_word(word)
        return base * abs(e)

    def _mul_word(self, u: list[int], word: Iterable[tuple[int, int]]) -> None:
        for g, e in word:
            self._mul_gen(u, g, e)

    def _mul_gen(self, u: list[int], k: int, e: int) -> None:
        """In place: ``u <- u * b_k^e``."""
        if e == 0:
            return
        m = self.m
        step = 1 if e > 0 else -1
        conj = self._conj[k] if e > 0 else self._conj_inv[k]
        for _ in range(abs(e)):
            tail = [(j, u[j]) for j in range(k + 1, m) if u[j]]
            if not tail or all(j not in conj for j, _ in tail):
                # every later factor commutes with b_k
                u[k] += step
                continue
            for j, _ in tail:
                u[j] = 0
            u[k] += step
            for j, x in tail:
                rel = conj.get(j)
                if rel is None:
                    self._mul_gen(u, j, x)
                else:
                    self._mul_word(u, self._power_word(rel, x))

    def _inverse_vec(self, u: Sequence[int]) -> list[int]:
        v = [0] * self.m
        self._mul_word(v, self._inverse_word(self._word(u)))
        return v

    def _commutator_vec(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        out = self._inverse_vec(u)
        self._mul_word(out, self._word(self._inverse_vec(v)))
        self._mul_word(out, self._word(u))
        self._mul_word(out, self._word(v))
        return out

    # -- public element API ----------------------------------------------------

    def element(self, exponents: Sequence[int]) -> NilpotentWord:
        if len(exponents) != self.m:
            raise ValueError(f"expected {self.m} exponents, got {len(exponents)}")
        return NilpotentWord(self.d, self.c, tuple(int(e) for e in exponents))

    def identity(self) -> NilpotentWord:
        return self.element([0] * self.m)

    def generator(self, j: int) -> NilpotentWord:
        """Basis element ``b_j`` (0-based order index)."""
        return self.element(self._unit(j))

    def letter(self, i: int) -> NilpotentWord:
        """The free generator ``x_i`` (1-based)."""
        if not 1 <= i <= self.d:
            raise ValueError(f"letter x{i} out of range 1..{self.d}")
        return self.generator(i - 1)

    def _check(self, *elems: NilpotentWord) -> None:
        for x in elems:
            if x.basis_ref != (self.d, self.c):
                raise ValueError(f"basis mismatch: {x.basis_ref} vs {(self.d, self.c)}")

    def collect(self, word: Sequence[int]) -> NilpotentWord:
        """Normal form of a word given as signed 1-based letters (``-2`` is ``x2^-1``)."""
        u = [0] * self.m
        for letter in word:
            i = abs(letter)
            if letter == 0 or i > self.d:
                raise ValueError(f"letter index {letter} out of range for d={self.d}")
            self._mul_gen(u, i - 1, 1 if letter > 0 else -1)
        return self.element(u)

    def multiply(self, u: NilpotentWord, v: NilpotentWord) -> NilpotentWord:
        self._check(u, v)
        out = list(u.exponents)
        self._mul_word(out, self._word(v.exponents))
        return self.element(out)

    def inverse(self, u: NilpotentWord) -> NilpotentWord:
        self._check(u)
        return self.element(self._inverse_vec(u.exponents))

    def commutator(self, u: NilpotentWord, v: NilpotentWord) -> NilpotentWord:
        """``[u, v] = u^-1 v^-1 u v``."""
        self._check(u, v)
        return self.element(self._commutator_vec(u.exponents, v.exponents))

    def left_normed(self, elems: Sequence[NilpotentWord]) -> NilpotentWord:
        out = elems[0]
        for x in elems[1:]:
            out = self.commutator(out, x)
        return out

    def to_letters(self, u: NilpotentWord) -> list[int]:
        """A letter word representing ``u`` (basic commutators expanded in the free group)."""
        self._check(u)
        out: list[int] = []
        for i, e in u.support().items():
            w = expand_commutator(self.basis[i])
            if e < 0:
                w = [-x for x in reversed(w)]
            out += w * abs(e)
        return out

    def stratum_weights(self, exponents: Sequence[int]) -> set[int]:
        return {self.weights[i] for i, e in enumerate(exponents) if e}


def expand_commutator(b: BasicCommutator) -> list[int]:
    """Free-group word (signed letters) for a basic commutator, ``[a, b] = a^-1 b^-1 a b``."""
    if b.is_letter:
        return [b.letter]
    a, c = expand_commutator(b.left), expand_commutator(b.right)
    inv = lambda w: [-x for x in reversed(w)]
    return inv(a) + inv(c) + a + c


@lru_cache(maxsize=16)
def free_nilpotent_group(d: int, c: int) -> FreeNilpotentGroup:
    return FreeNilpotentGroup(d, c)


def collect(word: Sequence[int], d: int, c: int) -> NilpotentWord:
    return free_nilpotent_group(d, c).collect(word)


def multiply(u: NilpotentWord, v: NilpotentWord) -> NilpotentWord:
    if u.basis_ref != v.basis_ref:
        raise ValueError(f"basis mismatch: {u.basis_ref} vs {v.basis_ref}")
    return free_nilpotent_group(u.d, u.c).multiply(u, v)


def inverse(u: NilpotentWord) -> NilpotentWord:
    return free_nilpotent_group(u.d, u.c).inverse(u)


def commutator(u: NilpotentWord, v: NilpotentWord) -> NilpotentWord:
    if u.basis_ref != v.basis_ref:
        raise ValueError(f"basis mismatch: {u.basis_ref} vs {v.basis_ref}")
    return free_nilpotent_group(u.d, u.c).commutator(u, v)


def quotient_rank(d: int, n: int, i: int) -> int:
    """Rank of the free abelian group gamma_n(F)/gamma_{n+i}(F), as a Witt sum."""
    if d < 1 or n < 1 or i < 1:
        raise ValueError(f"quotient_rank needs d, n, i >= 1, got {d}, {n}, {i}")
    check_cap("collect_rank", d)
    check_cap("collect_class", n + i - 1)
    return sum(witt(w, d) for w in range(n, n + i))


def stratum_quotient(d: int, n: int, i: int) -> tuple[int, list[int]]:
    """Rank and nontrivial elementary divisors of gamma_n/gamma_{n+i}, via collection.

    Every left-normed letter commutator of weight n..n+i-1 is collected in the
    class n+i-1 free nilpotent group and projected onto the weight n..n+i-1
    coordinates; the integer span of the projections is measured by its
    Smith normal form.  A free abelian quotient has no divisors other than 1.
    """
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    c = n + i - 1
    g = free_nilpotent_group(d, c)
    cols = [k for k, w in enumerate(g.weights) if w >= n]
    rows = []
    for w in range(n, c + 1):
        for letters in itertools.product(range(1, d + 1), repeat=w):
            x = g.left_normed([g.letter(a) for a in letters])
            if any(x.exponents[k] for k, wk in enumerate(g.weights) if wk < n):
                raise ArithmeticError(f"commutator of weight {w} has a component below weight {n}")
            rows.append([x.exponents[k] for k in cols])
    if not cols:
        return 0, []
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [abs(int(snf[k, k])) for k in range(min(snf.shape))]
    nonzero = [v for v in diag if v]
    return len(nonzero), [v for v in nonzero if v != 1]


_TOKEN = re.compile(r"^(?:x)?(-?\d+)(?:\^(-?\d+))?$")


def parse_word(text: str) -> list[int]:
    """Parse ``"x2 x1 x1^-1"``, ``"x2*x1^2"`` or ``"2,1,-1"`` into signed letters."""
    out: list[int] = []
    for tok in re.split(r"[\s,*.]+", text.strip()):
        if not tok:
            continue
        match = _TOKEN.match(tok)
        if not match:
            raise ValueError(f"cannot parse word token {tok!r}")
        letter, power = int(match.group(1)), int(match.group(2) or 1)
        if letter == 0:
            raise ValueError("letters are 1-based")
        out += [letter if power > 0 else -letter] * abs(power)
    return out
