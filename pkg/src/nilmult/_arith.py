"""Small exact integer helpers shared across modules."""

from __future__ import annotations

from functools import lru_cache


@lru_cache(maxsize=4096)
def factorize(m: int) -> dict[int, int]:
    """Prime factorization by trial division; ``factorize(1) == {}``."""
    if m < 1:
        raise ValueError(f"cannot factor {m}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    small = [k for k in range(1, int(n**0.5) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def prime_power(n: int) -> tuple[int, int] | None:
    """``(p, e)`` with ``n == p**e``, ``(1, 0)`` for ``n == 1``, else None."""
    f = factorize(n)
    if not f:
        return (1, 0)
    if len(f) == 1:
        return next(iter(f.items()))
    return None
