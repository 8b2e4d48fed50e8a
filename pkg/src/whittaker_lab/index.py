"""Multi-indices in Z_{>=0}^n and their degree-then-lex total order.

A multi-index is a plain tuple of non-negative ints.  The order compares total
degree first, then the first differing coordinate; ``order_key`` realizes it
as an ordinary tuple comparison so ``sorted(..., key=order_key)`` works.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import count
from math import comb, prod
from typing import Iterator, Sequence

MultiIndex = tuple[int, ...]


class DimensionError(ValueError):
    """Operands live in different ambient dimensions."""


def _check_same(m: Sequence[int], r: Sequence[int]) -> None:
    if len(m) != len(r):
        raise DimensionError(f"dimension mismatch: {len(m)} vs {len(r)}")


def order_key(m: Sequence[int]) -> tuple:
    return (sum(m), tuple(m))


def mi_cmp(m: Sequence[int], r: Sequence[int]) -> int:
    """Three-way comparison: -1 if m < r, 0 if equal, 1 if m > r."""
    _check_same(m, r)
    km, kr = order_key(m), order_key(r)
    return (km > kr) - (km < kr)


def mi_predecessor(m: Sequence[int]) -> MultiIndex:
    """Immediate predecessor of a nonzero multi-index in the total order."""
    m = tuple(m)
    if not m:
        raise DimensionError("empty multi-index")
    d = sum(m)
    if d == 0:
        raise ValueError("the zero multi-index has no predecessor")
    n = len(m)
    # lower the rightmost coordinate that still has room to its right, then
    # push everything behind it as far left as possible
    for l in range(n - 2, -1, -1):
        if m[l] > 0:
            tail = sum(m[l + 1:]) + 1
            return m[:l] + (m[l] - 1, tail) + (0,) * (n - l - 2)
    # m = (0, ..., 0, d) is the smallest index of degree d
    return (d - 1,) + (0,) * (n - 1)


def binom_multi(m: Sequence[int], r: Sequence[int]) -> int:
    _check_same(m, r)
    return prod(comb(mi, ri) if 0 <= ri <= mi else 0 for mi, ri in zip(m, r))


def falling_multi(m: Sequence[int], r: Sequence[int]) -> int:
    """prod_i m_i (m_i - 1) ... (m_i - r_i + 1); zero when some r_i > m_i."""
    out = 1
    for mi, ri in zip(m, r):
        if ri > mi:
            return 0
        for x in range(mi - ri + 1, mi + 1):
            out *= x
    return out


def factorial_multi(m: Sequence[int]) -> int:
    return falling_multi(m, m)


def unit(n: int, i: int) -> MultiIndex:
    """The coordinate vector e_i (0-based axis)."""
    if not 0 <= i < n:
        raise IndexError(f"axis {i} out of range for n={n}")
    return tuple(1 if k == i else 0 for k in range(n))


def zero(n: int) -> MultiIndex:
    return (0,) * n


def add(m: Sequence[int], r: Sequence[int]) -> MultiIndex:
    return tuple(x + y for x, y in zip(m, r))


def sub(m: Sequence[int], r: Sequence[int]) -> MultiIndex | None:
    """m - r, or None when a coordinate would go negative."""
    out = tuple(x - y for x, y in zip(m, r))
    return None if any(x < 0 for x in out) else out


def leq(r: Sequence[int], m: Sequence[int]) -> bool:
    """Coordinatewise r <= m (the divisibility order, not the total order)."""
    return all(x <= y for x, y in zip(r, m))


@lru_cache(maxsize=None)
def of_degree(n: int, d: int) -> tuple[MultiIndex, ...]:
    """All multi-indices of total degree d, ascending in the total order."""
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d + 1):
        for rest in of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def up_to_degree(n: int, d: int) -> tuple[MultiIndex, ...]:
    """All multi-indices with |m| <= d, ascending in the total order."""
    out: list[MultiIndex] = []
    for k in range(d + 1):
        out.extend(of_degree(n, k))
    return tuple(out)


def enumerate_indices(n: int) -> Iterator[MultiIndex]:
    """Z_{>=0}^n in increasing order (infinite)."""
    for d in count():
        yield from of_degree(n, d)


def rank_of(m: Sequence[int]) -> int:
    """Position of m in the enumeration, i.e. #{r : r < m}."""
    n, d = len(m), sum(m)
    below = comb(d - 1 + n, n) if d > 0 else 0
    return below + of_degree(n, d).index(tuple(m))


def box(m: Sequence[int]) -> list[MultiIndex]:
    """Every s with s <= m coordinatewise, in product order."""
    out: list[MultiIndex] = [()]
    for mi in m:
        out = [s + (x,) for s in out for x in range(mi + 1)]
    return out
