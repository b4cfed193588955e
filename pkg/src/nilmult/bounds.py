"""Order, exponent and generator-count inequalities for c-nilpotent multipliers.

Each evaluator returns ``BoundReport`` values.  The left side is the group
quantity being bounded (unknown unless the multiplier is known); the right
side is always computed.  Relations are kept as stated: ``divides`` where the
inequality is a divisibility, ``<=`` / ``>=`` otherwise.

Notation carried by ``BoundContext``:
    n: |G| = p^n        e: exp(G) = p^e        k: exp(Z(G)) = p^k
    t: nilpotency class d: d(G)                r: special rank
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb, prod
from typing import Callable, Optional, Union

from nilmult._arith import factorize
from nilmult.abelian import AbelianGroup, canonicalize, tensor_power
from nilmult.group_engine import FiniteGroup
from nilmult.multiplier import GroupLike, KnownMultiplier, MultiplierQuery, abelian_multiplier, chi, known_multiplier


@dataclass(frozen=True, order=False)
class PValue:
    """A positive integer kept as its prime factorization."""

    factors: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, n: int) -> "PValue":
        if n < 1:
            raise ValueError(f"PValue needs a positive integer, got {n}")
        return cls(tuple(sorted(factorize(n).items())))

    @classmethod
    def prime_power(cls, p: Optional[int], e: int) -> "PValue":
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            return cls()
        if p is None:
            raise ValueError("prime needed for a nonzero exponent")
        return cls(((p, e),))

    @property
    def value(self) -> int:
        return prod(p**e for p, e in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __mul__(self, other: "PValue") -> "PValue":
        out = self.as_dict()
        for p, e in other.factors:
            out[p] = out.get(p, 0) + e
        return PValue(tuple(sorted(out.items())))

    def divides(self, other: "PValue") -> bool:
        theirs = other.as_dict()
        return all(theirs.get(p, 0) >= e for p, e in self.factors)

    def __le__(self, other: "PValue") -> bool:
        if self.divides(other):
            return True
        return self.value <= other.value

    def __lt__(self, other: "PValue") -> bool:
        return self != other and self <= other

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


Side = Union[PValue, int]

ORDER, EXPONENT, GENERATORS = "order", "exponent", "generators"


@dataclass(frozen=True)
class BoundReport:
    bound_id: str
    quantity: str
    lhs_label: str
    lhs: Optional[Side]
    rhs: Optional[Side]
    relation: str
    applicable: bool
    reason: Optional[str] = None
    note: str = ""

    @property
    def holds(self) -> Optional[bool]:
        """True/False when both sides are known and the bound applies, else None."""
        if not self.applicable or self.lhs is None or self.rhs is None:
            return None
        return _compare(self.lhs, self.rhs, self.relation)

    @property
    def status(self) -> str:
        if not self.applicable:
            return "not applicable"
        if self.holds is None:
            return "unverifiable (lhs unknown)"
        return "holds" if self.holds else "FAILS"

    def with_lhs(self, lhs: Optional[Side]) -> "BoundReport":
        return BoundReport(self.bound_id, self.quantity, self.lhs_label, lhs, self.rhs, self.relation,
                           self.applicable, self.reason, self.note)


def _compare(lhs: Side, rhs: Side, relation: str) -> bool:
    if relation == "divides":
        return lhs.divides(rhs) if isinstance(lhs, PValue) else rhs % lhs == 0
    if relation == "<=":
        return lhs <= rhs
    if relation == ">=":
        return rhs <= lhs
    raise ValueError(f"unknown relation {relation!r}")


def _na(bound_id: str, quantity: str, label: str, relation: str, reason: str) -> BoundReport:
    return BoundReport(bound_id, quantity, label, None, None, relation, False, reason)


# -- context ----------------------------------------------------------------------


@dataclass
class BoundContext:
    """Every structural quantity the evaluators need, for one group.

    Built either from a table group or straight from an abelian group in
    invariant-factor form (no table needed for the latter).
    """

    name: str
    order: int
    p: Optional[int]
    n: Optional[int]
    exponent: int
    class_t: Optional[int]
    d: int
    special_rank: Optional[int]
    gamma_orders: list[int]              # |gamma_j| for j = 1..t+1
    gamma_ab: list[AbelianGroup]         # abelianization of gamma_j
    gamma_exp: list[int]
    quotient_ab: dict[int, AbelianGroup]  # Q_j = G/gamma_j abelianized, j = 2..t
    quotient_exp: dict[int, int]
    center_exponent: int
    central_quotient_d: Optional[int]    # d(G/B), B cyclic central of order exp(Z(G))
    central_b_label: str
    abelianization: AbelianGroup
    last_term_ab: Optional[AbelianGroup] = None       # gamma_t(G)
    upper_quotient_ab: Optional[AbelianGroup] = None  # G/Z_{t-1}(G)
    last_quotient: Optional[GroupLike] = None         # G/gamma_t(G)
    group: Optional[GroupLike] = None
    d8_formula_at_c1: bool = False
    _multipliers: dict = field(default_factory=dict, repr=False)

    @property
    def is_pgroup(self) -> bool:
        # the trivial group counts, with every p-power side equal to 1
        return self.p is not None or self.order == 1

    @property
    def nilpotent(self) -> bool:
        return self.class_t is not None

    @property
    def e(self) -> int:
        return _log(self.exponent, self.p)

    @property
    def k(self) -> int:
        return _log(self.center_exponent, self.p)

    def gamma_order(self, j: int) -> int:
        return self.gamma_orders[min(j, len(self.gamma_orders)) - 1]

    def multiplier(self, c: int) -> Optional[KnownMultiplier]:
        if c not in self._multipliers:
            self._multipliers[c] = known_multiplier(MultiplierQuery(self.group, c),
                                                    d8_formula_at_c1=self.d8_formula_at_c1)
        return self._multipliers[c]

    def quotient_multiplier(self, c: int) -> Optional[KnownMultiplier]:
        if self.last_quotient is None:
            return None
        return known_multiplier(MultiplierQuery(self.last_quotient, c), d8_formula_at_c1=self.d8_formula_at_c1)

    def pp(self, e: int) -> PValue:
        return PValue.prime_power(self.p, e)

    # -- constructors --

    @classmethod
    def from_abelian(cls, a: AbelianGroup, name: str = "") -> "BoundContext":
        f = factorize(a.order)
        p = next(iter(f)) if len(f) == 1 else None
        t = 1 if a.order > 1 else 0
        return cls(
            name=name or str(a),
            order=a.order,
            p=p,
            n=f[p] if p else (0 if a.order == 1 else None),
            exponent=a.exponent,
            class_t=t,
            d=a.rank,
            special_rank=a.rank,
            gamma_orders=[a.order, 1] if t else [1],
            gamma_ab=[a, AbelianGroup()] if t else [AbelianGroup()],
            gamma_exp=[a.exponent, 1] if t else [1],
            quotient_ab={},
            quotient_exp={},
            center_exponent=a.exponent,
            # a cyclic summand of maximal order is a direct summand
            central_quotient_d=max(a.rank - 1, 0),
            central_b_label=f"Z{a.exponent}" if a.order > 1 else "trivial",
            abelianization=a,
            group=a,
        )

    @classmethod
    def from_group(cls, g: FiniteGroup, *, b_generator: Optional[int] = None) -> "BoundContext":
        an = g.analysis()
        t = an.class_t
        gammas = list(an.lower_central)
        gamma_ab = [g.subgroup_as_group(s).abelianization() for s in gammas]
        quotient_ab, quotient_exp = {}, {}
        if t is not None:
            for j in range(2, t + 1):
                q = g.quotient(an.gamma(j))
                quotient_ab[j] = q.abelianization()
                quotient_exp[j] = q.exponent
        center = g.center()
        center_exp = g.subgroup_exponent(center)
        orders = g.element_orders()
        if b_generator is None:
            b_generator = next(x for x in sorted(center) if orders[x] == center_exp)
        elif b_generator not in center or orders[b_generator] != center_exp:
            raise ValueError("override for B must be a central element of order exp(Z(G))")
        b = g.closure([b_generator])
        ctx = cls(
            name=g.name,
            order=g.order,
            p=an.p,
            n=an.n if an.p else (0 if g.order == 1 else None),
            exponent=an.exponent,
            class_t=t,
            d=an.d,
            special_rank=an.special_rank,
            gamma_orders=[len(s) for s in gammas],
            gamma_ab=gamma_ab,
            gamma_exp=[g.subgroup_exponent(s) for s in gammas],
            quotient_ab=quotient_ab,
            quotient_exp=quotient_exp,
            center_exponent=center_exp,
            central_quotient_d=g.quotient(b).min_generators(),
            central_b_label=f"<{g.labels[b_generator]}>",
            abelianization=g.abelianization(),
            group=g,
        )
        if t is not None and t >= 2:
            ctx.last_term_ab = gamma_ab[t - 1]
            ctx.upper_quotient_ab = g.quotient(an.zeta(t - 1)).abelianization()
            ctx.last_quotient = g.quotient(an.gamma(t))
        return ctx


def _log(value: int, p: Optional[int]) -> int:
    if value == 1:
        return 0
    e = 0
    while value > 1:
        if p is None or value % p:
            raise ArithmeticError(f"{value} is not a power of {p}")
        value //= p
        e += 1
    return e


def context(g: Union[GroupLike, BoundContext]) -> BoundContext:
    if isinstance(g, BoundContext):
        return g
    if isinstance(g, AbelianGroup):
        return BoundContext.from_abelian(g)
    return BoundContext.from_group(g)


# -- helpers for the left sides ------------------------------------------------


def _mult_order(ctx: BoundContext, c: int) -> Optional[PValue]:
    m = ctx.multiplier(c)
    return None if m is None else PValue.of(m.value.order)


def _mult_exponent(ctx: BoundContext, c: int) -> Optional[PValue]:
    m = ctx.multiplier(c)
    return None if m is None else PValue.of(m.value.exponent)


def _mult_rank(ctx: BoundContext, c: int) -> Optional[int]:
    m = ctx.multiplier(c)
    return None if m is None else m.value.rank


def _gamma_times_mult(ctx: BoundContext, j: int, c: int) -> Optional[PValue]:
    m = _mult_order(ctx, c)
    return None if m is None else PValue.of(ctx.gamma_order(j)) * m


def _label_gm(j: str, c: int) -> str:
    return f"|gamma_{j}(G)||M^({c})(G)|"


# -- evaluators -------------------------------------------------------------------


def witt_order_bounds(g, c: int) -> list[BoundReport]:
    """p^chi_{c+1}(d) <= |gamma_{c+1}(G)||M^(c)(G)| <= p^chi_{c+1}(n) for a d-generator group of order p^n."""
    ctx = context(g)
    label = _label_gm(str(c + 1), c)
    if not ctx.is_pgroup:
        return [_na(i, ORDER, label, rel, "not a p-group")
                for i, rel in (("witt_order.lower", ">="), ("witt_order.upper", "<="))]
    lhs = _gamma_times_mult(ctx, c + 1, c)
    return [
        BoundReport("witt_order.lower", ORDER, label, lhs, ctx.pp(chi(c + 1, ctx.d)), ">=", True,
                    note=f"d={ctx.d}"),
        BoundReport("witt_order.upper", ORDER, label, lhs, ctx.pp(chi(c + 1, ctx.n)), "<=", True,
                    note=f"n={ctx.n}"),
    ]


def central_cyclic_bound(g, c: int) -> BoundReport:
    """|gamma_{c+1}||M^(c)| <= p^(chi_{c+1}(n-k) + d k (1+d)^(c-1)) with d = d(G/B)."""
    ctx = context(g)
    label = _label_gm(str(c + 1), c)
    if not ctx.is_pgroup:
        return _na("central_cyclic", ORDER, label, "<=", "not a p-group")
    n, k, d = ctx.n, ctx.k, ctx.central_quotient_d
    exp = chi(c + 1, n - k) + d * k * (1 + d) ** (c - 1)
    return BoundReport("central_cyclic", ORDER, label, _gamma_times_mult(ctx, c + 1, c), ctx.pp(exp), "<=", True,
                       note=f"B={ctx.central_b_label}, n={n}, k={k}, d(G/B)={d}")


def _tensor_terms(ctx: BoundContext, c: int) -> list[AbelianGroup]:
    """tensor^{c+1}(gamma_{j+1}(G), Q_{j+1}) for j = 1..t-1, through abelianizations."""
    t = ctx.class_t or 0
    return [tensor_power(ctx.gamma_ab[j], ctx.quotient_ab[j + 1], c) for j in range(1, t)]


def lower_central_tensor_bounds(g, c: int) -> list[BoundReport]:
    """Bounds assembled from M^(c)(G/G') and the tensor powers along the lower central series."""
    ctx = context(g)
    label = _label_gm(str(c + 1), c)
    ids = (("lower_central.order", ORDER, label, "divides"),
           ("lower_central.exponent", EXPONENT, f"exp(M^({c})(G))", "divides"),
           ("lower_central.generators", GENERATORS, f"d(M^({c})(G))", "<="))
    if not ctx.nilpotent:
        return [_na(i, q, l, r, "not nilpotent") for i, q, l, r in ids]
    base = abelian_multiplier(ctx.abelianization, c)
    terms = _tensor_terms(ctx, c)
    order_rhs = PValue.of(base.order * prod(x.order for x in terms))
    exp_rhs = PValue.of(base.exponent * prod(x.exponent for x in terms))
    gen_rhs = base.rank + sum(x.rank for x in terms)
    note = f"M^({c})(G/G')={base}; tensor terms: " + (", ".join(map(str, terms)) or "none")
    return [
        BoundReport(ids[0][0], ORDER, label, _gamma_times_mult(ctx, c + 1, c), order_rhs, "divides", True, note=note),
        BoundReport(ids[1][0], EXPONENT, ids[1][2], _mult_exponent(ctx, c), exp_rhs, "divides", True, note=note),
        BoundReport(ids[2][0], GENERATORS, ids[2][2], _mult_rank(ctx, c), gen_rhs, "<=", True, note=note),
    ]


def last_term_tensor_bounds(g, c: int) -> list[BoundReport]:
    """Bounds through M^(c)(G/gamma_t(G)) and tensor^{c+1}(gamma_t(G), G/Z_{t-1}(G))."""
    ctx = context(g)
    t = ctx.class_t
    case_a = t is not None and c + 1 <= t
    label = _label_gm("t" if case_a else str(c + 1), c)
    ids = (("last_term.order", ORDER, label, "divides"),
           ("last_term.exponent", EXPONENT, f"exp(M^({c})(G))", "divides"),
           ("last_term.generators", GENERATORS, f"d(M^({c})(G))", "<="))
    if t is None or t < 2:
        return [_na(i, q, l, r, "needs a nilpotent group of class >= 2") for i, q, l, r in ids]
    qm = ctx.quotient_multiplier(c)
    if qm is None:
        return [_na(i, q, l, r, "M^(c)(G/gamma_t(G)) unknown") for i, q, l, r in ids]
    term = tensor_power(ctx.last_term_ab, ctx.upper_quotient_ab, c)
    j = t if case_a else c + 1
    note = f"case {'c+1<=t' if case_a else 'c+1>t'}; M^({c})(G/gamma_t)={qm.value}; tensor={term}"
    return [
        BoundReport(ids[0][0], ORDER, label, _gamma_times_mult(ctx, j, c),
                    PValue.of(qm.value.order * term.order), "divides", True, note=note),
        BoundReport(ids[1][0], EXPONENT, ids[1][2], _mult_exponent(ctx, c),
                    PValue.of(qm.value.exponent * term.exponent), "divides", True, note=note),
        BoundReport(ids[2][0], GENERATORS, ids[2][2], _mult_rank(ctx, c), qm.value.rank + term.rank, "<=", True,
                    note=note),
    ]


def generators_by_rank(g, c: int) -> BoundReport:
    """d(M^(c)(G)) <= chi_{c+1}(d) + r^(c+1) (t-1)."""
    ctx = context(g)
    label = f"d(M^({c})(G))"
    if not ctx.is_pgroup:
        return _na("generators_by_rank", GENERATORS, label, "<=", "not a p-group")
    if ctx.special_rank is None:
        return _na("generators_by_rank", GENERATORS, label, "<=", "special rank not computed (cap exceeded)")
    t = ctx.class_t
    rhs = chi(c + 1, ctx.d) + ctx.special_rank ** (c + 1) * max(t - 1, 0)
    return BoundReport("generators_by_rank", GENERATORS, label, _mult_rank(ctx, c), rhs, "<=", True,
                       note=f"d={ctx.d}, r={ctx.special_rank}, t={t}")


def exponent_by_series(g, c: int) -> list[BoundReport]:
    """exp(M^(c)(G)) <= exp(G/G') prod_j e_j, e_j = min(exp Q_{j+1}, exp gamma_{j+1}); and <= p^(e t)."""
    ctx = context(g)
    label = f"exp(M^({c})(G))"
    if not ctx.nilpotent:
        return [_na("exponent_by_series", EXPONENT, label, "<=", "not nilpotent"),
                _na("exponent_by_class", EXPONENT, label, "<=", "not nilpotent")]
    t = ctx.class_t
    es = [min(ctx.quotient_exp[j + 1], ctx.gamma_exp[j]) for j in range(1, t)]
    lhs = _mult_exponent(ctx, c)
    out = [BoundReport("exponent_by_series", EXPONENT, label, lhs,
                       PValue.of(ctx.abelianization.exponent * prod(es)), "<=", True,
                       note=f"exp(G/G')={ctx.abelianization.exponent}, e_j={es}")]
    if ctx.is_pgroup:
        out.append(BoundReport("exponent_by_class", EXPONENT, label, lhs, ctx.pp(ctx.e * t), "<=", True,
                               note=f"e={ctx.e}, t={t}"))
    else:
        out.append(_na("exponent_by_class", EXPONENT, label, "<=", "not a p-group"))
    return out


def schur_suite(g) -> list[BoundReport]:
    """The classical c = 1 inequalities for the Schur multiplier M(G)."""
    ctx = context(g)
    gm = "|G'||M(G)|"
    out: list[BoundReport] = []
    if not ctx.is_pgroup:
        reason = "not a p-group"
        out += [_na("schur.center_order", ORDER, gm, "<=", reason),
                _na("schur.order.lower", ORDER, gm, ">=", reason),
                _na("schur.order.upper", ORDER, gm, "<=", reason),
                _na("schur.generators_by_rank", GENERATORS, "d(M(G))", "<=", reason),
                _na("schur.exponent_by_class", EXPONENT, "exp(M(G))", "<=", reason),
                _na("schur.exponent_by_class_minus_one", EXPONENT, "exp(M(G))", "<=", reason)]
        return out
    lhs = _gamma_times_mult(ctx, 2, 1)
    n, k, d, t = ctx.n, ctx.k, ctx.d, ctx.class_t
    out.append(BoundReport("schur.center_order", ORDER, gm, lhs, ctx.pp((n - k) * (n + k - 1) // 2), "<=", True,
                           note=f"n={n}, k={k}"))
    out.append(BoundReport("schur.order.lower", ORDER, gm, lhs, ctx.pp(d * (d - 1) // 2), ">=", True, note=f"d={d}"))
    out.append(BoundReport("schur.order.upper", ORDER, gm, lhs, ctx.pp(n * (n - 1) // 2), "<=", True, note=f"n={n}"))
    if ctx.special_rank is None:
        out.append(_na("schur.generators_by_rank", GENERATORS, "d(M(G))", "<=",
                       "special rank not computed (cap exceeded)"))
    else:
        r = ctx.special_rank
        out.append(BoundReport("schur.generators_by_rank", GENERATORS, "d(M(G))", _mult_rank(ctx, 1),
                               r * ((2 * t - 1) * r - 1) // 2, "<=", True, note=f"r={r}, t={t}"))
    by_class = ctx.pp(ctx.e * t)
    out.append(BoundReport("schur.exponent_by_class", EXPONENT, "exp(M(G))", _mult_exponent(ctx, 1), by_class, "<=",
                           True, note=f"e={ctx.e}, t={t}"))
    if t >= 2:
        sharper = ctx.pp(ctx.e * (t - 1))
        if not sharper <= by_class:
            raise AssertionError("class-minus-one exponent bound exceeds the class bound")
        out.append(BoundReport("schur.exponent_by_class_minus_one", EXPONENT, "exp(M(G))", _mult_exponent(ctx, 1),
                               sharper, "<=", True, note=f"e={ctx.e}, t={t}"))
    else:
        out.append(_na("schur.exponent_by_class_minus_one", EXPONENT, "exp(M(G))", "<=", "class < 2"))
    return out


def all_reports(g, c: int) -> list[BoundReport]:
    ctx = context(g)
    out = witt_order_bounds(ctx, c)
    out.append(central_cyclic_bound(ctx, c))
    out += lower_central_tensor_bounds(ctx, c)
    out += last_term_tensor_bounds(ctx, c)
    out.append(generators_by_rank(ctx, c))
    out += exponent_by_series(ctx, c)
    if c == 1:
        out += schur_suite(ctx)
    return out


def half_class_exponent_note(g) -> Optional[str]:
    """Informational only: the sharper exponent estimate p^(e * ceil(t/2)) for class t >= 2."""
    ctx = context(g)
    if not ctx.is_pgroup or not ctx.class_t or ctx.class_t < 2:
        return None
    return f"informational: exp(M(G)) <= {ctx.pp(ctx.e * -(-ctx.class_t // 2))} (not verified here)"


# -- comparison -------------------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    quantity: str
    lhs_label: str
    rows: tuple[tuple[str, Side], ...]   # (bound_id, rhs) sorted ascending
    tightest: tuple[str, ...]

    @property
    def strict_winner(self) -> Optional[str]:
        return self.tightest[0] if len(self.tightest) == 1 else None

    def rhs(self, bound_id: str) -> Side:
        return dict(self.rows)[bound_id]

    def relation(self, a: str, b: str) -> str:
        x, y = self.rhs(a), self.rhs(b)
        if x == y:
            return "="
        return "<" if x <= y else ">"


def _numeric(v: Side) -> int:
    return v.value if isinstance(v, PValue) else v


def compare_bounds(g, c: int) -> list[Comparison]:
    """Applicable upper bounds grouped by the quantity they bound, smallest first."""
    groups: dict[tuple[str, str], list[tuple[str, Side]]] = {}
    for r in all_reports(g, c):
        if not r.applicable or r.relation == ">=" or r.rhs is None:
            continue
        groups.setdefault((r.quantity, r.lhs_label), []).append((r.bound_id, r.rhs))
    out = []
    for (quantity, label), rows in sorted(groups.items()):
        rows.sort(key=lambda row: (_numeric(row[1]), row[0]))
        best = _numeric(rows[0][1])
        tight = tuple(i for i, v in rows if _numeric(v) == best)
        out.append(Comparison(quantity, label, tuple(rows), tight))
    return out
