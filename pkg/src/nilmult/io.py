"""Group files and report serialization.

A group file is one JSON object with ``type`` in {table, perm, abelian}:

    {"type": "table", "labels": ["e", "a"], "table": [[0, 1], [1, 0]]}
    {"type": "perm", "degree": 4, "generators": [[2, 3, 4, 1], [2, 1, 3, 4]]}
    {"type": "abelian", "invariants": [2, 4]}

Permutation images are 1-based.  Abelian invariants may come in any order
and are canonicalized on load.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Union

from nilmult.abelian import AbelianGroup, canonicalize
from nilmult.bounds import BoundReport, PValue
from nilmult.caps import CapExceeded
from nilmult.group_engine import FiniteGroup, GroupError, from_permutations

GroupLike = Union[FiniteGroup, AbelianGroup]


class GroupFileError(ValueError):
    """The file is not a valid group description."""


def _require(obj: dict, key: str, kind: type):
    if key not in obj:
        raise GroupFileError(f"missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise GroupFileError(f"field {key!r} must be {kind.__name__}")
    return value


def _int_list(values, what: str) -> list[int]:
    if not isinstance(values, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise GroupFileError(f"{what} must be a list of integers")
    return values


def parse_group(obj, *, name: str = "") -> GroupLike:
    if not isinstance(obj, dict):
        raise GroupFileError("group description must be an object")
    kind = _require(obj, "type", str)
    try:
        if kind == "abelian":
            inv = _int_list(_require(obj, "invariants", list), "invariants")
            if any(v < 2 for v in inv):
                raise GroupFileError("abelian invariants must be >= 2")
            return canonicalize(inv)
        if kind == "table":
            labels = _require(obj, "labels", list)
            rows = _require(obj, "table", list)
            for row in rows:
                _int_list(row, "table rows")
            return FiniteGroup(labels, rows, name=name)
        if kind == "perm":
            degree = _require(obj, "degree", int)
            gens = _require(obj, "generators", list)
            for g in gens:
                _int_list(g, "generators")
            return from_permutations(degree, gens, name=name)
    except (GroupError, ValueError) as exc:
        if isinstance(exc, (GroupFileError, CapExceeded)):
            raise
        raise GroupFileError(str(exc)) from exc
    raise GroupFileError(f"unknown group type {kind!r}")


def load_group(path: Union[str, Path]) -> GroupLike:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise GroupFileError(f"{path}: not valid JSON ({exc.msg})") from exc
    return parse_group(obj, name=path.stem)


# -- reports ----------------------------------------------------------------------

CSV_COLUMNS = ("bound_id", "quantity", "lhs_label", "lhs", "relation", "rhs", "applicable", "holds", "reason", "note")


def _side(v) -> str | None:
    if v is None:
        return None
    return str(v.value if isinstance(v, PValue) else v)


def report_dict(r: BoundReport) -> dict:
    holds = r.holds
    return {
        "applicable": r.applicable,
        "bound_id": r.bound_id,
        "holds": "unverifiable" if holds is None and r.applicable else holds,
        "lhs": _side(r.lhs) if r.lhs is not None else "unknown",
        "lhs_label": r.lhs_label,
        "note": r.note,
        "quantity": r.quantity,
        "reason": r.reason,
        "relation": r.relation,
        "rhs": _side(r.rhs),
    }


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators.  Integers are pre-stringified by callers."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def reports_json(group: str, c: int, reports: Iterable[BoundReport], multiplier=None) -> str:
    return dumps({
        "c": str(c),
        "group": group,
        "multiplier": multiplier,
        "reports": [report_dict(r) for r in reports],
    })


def reports_csv(reports: Iterable[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        row = report_dict(r)
        w.writerow({k: "" if row[k] is None else row[k] for k in CSV_COLUMNS})
    return buf.getvalue()
