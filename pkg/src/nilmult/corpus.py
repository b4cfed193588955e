"""Built-in named groups with expected multipliers and bound fixtures.

Names resolve without files: ``cyclic(n)``, ``abelian(n1,n2,...)``,
``elementary(p,d)``, ``d8``, ``q8``, ``d16``, ``klein4``, ``trivial``,
``dihedral(n)`` (order 2n), ``extraspecial(p[,p|p2])``, ``heis(p)``, ``s3``, ``s4``.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from nilmult.abelian import AbelianGroup, canonicalize
from nilmult.bounds import BoundContext, PValue, all_reports, compare_bounds
from nilmult.group_engine import FiniteGroup, abelian_table, dihedral, extraspecial, quaternion, symmetric
from nilmult.multiplier import MultiplierQuery, known_multiplier

GroupLike = Union[FiniteGroup, AbelianGroup]

_CALL = re.compile(r"^\s*([a-z][a-z0-9_]*)\s*(?:\((.*)\))?\s*$", re.IGNORECASE)


class UnknownGroupName(ValueError):
    pass


def _ints(args: list[str]) -> list[int]:
    try:
        return [int(a) for a in args]
    except ValueError as exc:
        raise UnknownGroupName(f"non-integer argument in {args}") from exc


def resolve(name: str) -> GroupLike:
    """Build a corpus group from its name.  Abelian names give ``AbelianGroup`` values."""
    m = _CALL.match(name)
    if not m:
        raise UnknownGroupName(f"cannot parse group name {name!r}")
    head = m.group(1).lower()
    args = [a.strip() for a in m.group(2).split(",") if a.strip()] if m.group(2) else []
    fixed = {
        "d8": lambda: dihedral(4),
        "q8": quaternion,
        "d16": lambda: dihedral(8),
        "klein4": lambda: AbelianGroup((2, 2)),
        "trivial": lambda: AbelianGroup(()),
        "s3": lambda: symmetric(3),
        "s4": lambda: symmetric(4),
    }
    if head in fixed:
        if args:
            raise UnknownGroupName(f"{head} takes no arguments")
        return fixed[head]()
    if head == "cyclic":
        (n,) = _arity(head, _ints(args), 1)
        return canonicalize([n]) if n > 1 else AbelianGroup(())
    if head == "abelian":
        inv = _ints(args)
        if any(x < 1 for x in inv):
            raise UnknownGroupName("abelian invariants must be positive")
        return canonicalize([x for x in inv if x > 1])
    if head == "elementary":
        p, d = _arity(head, _ints(args), 2)
        return AbelianGroup.elementary(p, d)
    if head == "dihedral":
        (n,) = _arity(head, _ints(args), 1)
        if n < 3:
            raise UnknownGroupName("dihedral(n) needs n >= 3")
        return dihedral(n)
    if head == "heis":
        (p,) = _arity(head, _ints(args), 1)
        return extraspecial(p, True)
    if head == "extraspecial":
        if not args or len(args) > 2:
            raise UnknownGroupName("extraspecial(p[,p|p2])")
        (p,) = _ints(args[:1])
        flavour = args[1].lower() if len(args) == 2 else "p"
        if flavour not in ("p", "p2"):
            raise UnknownGroupName("extraspecial exponent flag must be p or p2")
        return extraspecial(p, flavour == "p")
    raise UnknownGroupName(f"unknown group name {head!r}")


def _arity(head: str, values: list[int], k: int) -> list[int]:
    if len(values) != k:
        raise UnknownGroupName(f"{head} takes {k} argument(s), got {len(values)}")
    return values


def as_table(g: GroupLike) -> FiniteGroup:
    if isinstance(g, FiniteGroup):
        return g
    return abelian_table(g.invariants, name=str(g))


# -- corpus entries -----------------------------------------------------------------


@dataclass(frozen=True)
class ExpectedMultiplier:
    c: int
    invariants: tuple[int, ...]
    provenance: str


@dataclass(frozen=True)
class BoundFixture:
    """A frozen value for one side of one report: ``side`` is ``lhs`` or ``rhs``."""

    c: int
    bound_id: str
    side: str
    value: int
    provenance: str


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    multipliers: tuple[ExpectedMultiplier, ...] = ()
    fixtures: tuple[BoundFixture, ...] = ()

    def build(self) -> GroupLike:
        return resolve(self.name)


CLASSICAL = "classical Schur multiplier (pairwise gcd construction / literature value)"
ABELIAN = "abelian formula over invariant factors"
D8F = "Moghaddam's D8 formula"
EXT = "tensor-power evaluation over the lower central series"
WITT = "closed-form Witt count"


def _extraspecial_fixtures(p: int) -> tuple[BoundFixture, ...]:
    return (
        BoundFixture(2, "lower_central.order", "rhs", p**6, EXT),
        BoundFixture(2, "witt_order.upper", "rhs", p**8, WITT),
    )


CORPUS: tuple[CorpusEntry, ...] = (
    CorpusEntry("trivial", (ExpectedMultiplier(1, (), ABELIAN),)),
    CorpusEntry("cyclic(2)", (ExpectedMultiplier(1, (), CLASSICAL),)),
    CorpusEntry("cyclic(8)", (ExpectedMultiplier(2, (), ABELIAN),)),
    CorpusEntry("cyclic(9)"),
    CorpusEntry("klein4", (ExpectedMultiplier(1, (2,), CLASSICAL), ExpectedMultiplier(2, (2, 2), ABELIAN))),
    CorpusEntry(
        "abelian(4,2)",
        (ExpectedMultiplier(1, (2,), CLASSICAL),),
        (BoundFixture(1, "central_cyclic", "rhs", 4, "n=3, k=2, d(G/B)=1"),
         BoundFixture(1, "central_cyclic", "lhs", 2, CLASSICAL)),
    ),
    CorpusEntry(
        "elementary(2,3)",
        (ExpectedMultiplier(1, (2, 2, 2), CLASSICAL), ExpectedMultiplier(2, (2,) * 8, ABELIAN)),
        (BoundFixture(1, "witt_order.lower", "lhs", 2**3, ABELIAN),
         BoundFixture(1, "witt_order.lower", "rhs", 2**3, WITT),
         BoundFixture(2, "witt_order.lower", "rhs", 2**8, WITT),
         BoundFixture(2, "generators_by_rank", "rhs", 8, WITT)),
    ),
    CorpusEntry("elementary(3,2)", (ExpectedMultiplier(1, (3,), CLASSICAL),)),
    CorpusEntry("abelian(8,2)"),
    CorpusEntry("abelian(4,4)", (ExpectedMultiplier(1, (4,), CLASSICAL),)),
    CorpusEntry("abelian(9,3)", (ExpectedMultiplier(1, (3,), CLASSICAL),)),
    CorpusEntry("abelian(4,2,2)", (ExpectedMultiplier(1, (2, 2, 2), CLASSICAL),)),
    CorpusEntry("abelian(6,2)", (ExpectedMultiplier(1, (2,), CLASSICAL),)),
    CorpusEntry(
        "d8",
        (ExpectedMultiplier(1, (2,), CLASSICAL),
         ExpectedMultiplier(2, (4, 2), D8F),
         ExpectedMultiplier(3, (4, 2, 2), D8F)),
        _extraspecial_fixtures(2) + (
            BoundFixture(1, "lower_central.order", "rhs", 8, EXT),
            BoundFixture(1, "lower_central.order", "lhs", 4, CLASSICAL),
            BoundFixture(1, "schur.center_order", "rhs", 8, "n=3, k=1"),
            BoundFixture(2, "exponent_by_series", "rhs", 4, D8F),
            BoundFixture(2, "exponent_by_series", "lhs", 4, D8F),
            BoundFixture(2, "last_term.exponent", "lhs", 4, D8F),
            BoundFixture(2, "last_term.exponent", "rhs", 4, EXT),
        ),
    ),
    CorpusEntry("q8", (ExpectedMultiplier(1, (), CLASSICAL),), _extraspecial_fixtures(2)),
    CorpusEntry("d16", (ExpectedMultiplier(1, (2,), CLASSICAL),)),
    CorpusEntry("dihedral(16)", (ExpectedMultiplier(1, (2,), CLASSICAL),)),
    CorpusEntry(
        "extraspecial(3,p)",
        (ExpectedMultiplier(1, (3, 3), CLASSICAL),),
        _extraspecial_fixtures(3) + (
            BoundFixture(1, "last_term.order", "lhs", 27, CLASSICAL),
            BoundFixture(1, "last_term.order", "rhs", 27, EXT),
        ),
    ),
    CorpusEntry("extraspecial(3,p2)", (ExpectedMultiplier(1, (), CLASSICAL),), _extraspecial_fixtures(3)),
    CorpusEntry("s3", (ExpectedMultiplier(1, (), CLASSICAL),)),
    CorpusEntry("dihedral(6)", (ExpectedMultiplier(1, (2,), CLASSICAL),)),
    CorpusEntry("s4"),
)


def entry(name: str) -> Optional[CorpusEntry]:
    return next((e for e in CORPUS if e.name == name), None)


def p_groups() -> list[CorpusEntry]:
    return [e for e in CORPUS if as_table(e.build()).prime() is not None]


# -- checks used by the sweep and the tests -------------------------------------------


def containment_failures(g: FiniteGroup, max_i: Optional[int] = None) -> list[tuple]:
    """Triples (M, N, i) where [M, gamma_i(N)] is not inside [M, N, ..., N] (i copies).

    Runs over all pairs of normal subgroups and 1 <= i <= max_i (the class by default).
    """
    if max_i is None:
        t = g.analysis().class_t
        max_i = max(t or 1, 1)
    normals = g.normal_subgroups()
    bad = []
    for m in normals:
        for n in normals:
            series = g.lower_central_series(n)
            for i in range(1, max_i + 1):
                gamma_i = series[min(i, len(series)) - 1]
                if not g.commutator_subgroup(m, gamma_i) <= g.iterated_commutator(m, n, i):
                    bad.append((m, n, i))
    return bad


@dataclass
class SweepResult:
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, ok: bool, label: str) -> None:
        self.checks += 1
        self.lines.append(f"{'PASS' if ok else 'FAIL'} {label}")
        if not ok:
            self.failures.append(label)


def _context(g: GroupLike) -> BoundContext:
    return BoundContext.from_abelian(g) if isinstance(g, AbelianGroup) else BoundContext.from_group(g)


def _side_value(v) -> Optional[int]:
    if v is None:
        return None
    return v.value if isinstance(v, PValue) else v


def sweep(class_max: int = 3, entries: tuple[CorpusEntry, ...] = CORPUS,
          progress: Optional[Callable[[str], None]] = None) -> SweepResult:
    """Check expected multipliers, bound fixtures, soundness of every report, and containment."""
    res = SweepResult()
    start = time.perf_counter()
    for e in entries:
        g = e.build()
        ctx = _context(g)
        expected = {m.c: m for m in e.multipliers}
        for c in range(1, class_max + 1):
            km = known_multiplier(MultiplierQuery(g, c))
            if c in expected:
                want = expected[c]
                got = None if km is None else km.value.invariants
                res.check(got == want.invariants,
                          f"{e.name} c={c} multiplier {got} == {want.invariants} [{want.provenance}]")
            if km is not None and ctx.is_pgroup and ctx.order > 1:
                res.check(_is_power_of(km.value.order, ctx.p), f"{e.name} c={c} |M| is a power of p")
            reports = {r.bound_id: r for r in all_reports(ctx, c)}
            for r in reports.values():
                if r.holds is not None:
                    res.check(r.holds, f"{e.name} c={c} {r.bound_id}: {r.lhs} {r.relation} {r.rhs}")
            for f in e.fixtures:
                if f.c != c:
                    continue
                r = reports.get(f.bound_id)
                got = None if r is None else _side_value(r.lhs if f.side == "lhs" else r.rhs)
                res.check(got == f.value, f"{e.name} c={c} {f.bound_id} {f.side} = {got} (want {f.value}) [{f.provenance}]")
            compare_bounds(ctx, c)
        if _order(g) <= 32:
            res.check(not containment_failures(as_table(g)), f"{e.name} [M, gamma_i(N)] <= [M, N, ..., N]")
        if progress:
            progress(e.name)
    res.seconds = time.perf_counter() - start
    return res


def _order(g: GroupLike) -> int:
    return g.order


def _is_power_of(value: int, p: Optional[int]) -> bool:
    if value == 1:
        return True
    if p is None:
        return False
    while value % p == 0:
        value //= p
    return value == 1
