"""Resource caps, overridable through the ``NILMULT_CAPS`` environment variable.

The variable holds either a JSON object or ``key=value`` pairs separated by
commas, e.g. ``NILMULT_CAPS="special_rank=256,closure=4096"``.
"""

from __future__ import annotations

import json
import os

DEFAULT_CAPS = {
    "basis_size": 10**6,
    "closure": 2000,
    "min_generators": 512,
    "special_rank": 128,
    "collect_class": 5,
    "collect_rank": 4,
}


class CapExceeded(RuntimeError):
    """A computation would exceed one of the configured resource caps."""

    def __init__(self, name: str, value: int, limit: int):
        super().__init__(f"{name} cap exceeded: {value} > {limit} (raise it via NILMULT_CAPS)")
        self.name = name
        self.value = value
        self.limit = limit


def _parse(raw: str) -> dict[str, int]:
    raw = raw.strip()
    if not raw:
        return {}
    if raw.startswith("{"):
        data = json.loads(raw)
    else:
        data = {}
        for part in raw.split(","):
            key, _, value = part.partition("=")
            data[key.strip()] = value.strip()
    out = {}
    for key, value in data.items():
        if key not in DEFAULT_CAPS:
            raise ValueError(f"unknown cap {key!r} in NILMULT_CAPS")
        out[key] = int(value)
    return out


def get_cap(name: str) -> int:
    # read on every call so tests and the CLI can adjust the environment
    return _parse(os.environ.get("NILMULT_CAPS", "")).get(name, DEFAULT_CAPS[name])


def check_cap(name: str, value: int) -> None:
    limit = get_cap(name)
    if value > limit:
        raise CapExceeded(name, value, limit)
