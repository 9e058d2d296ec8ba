"""Multi-index arithmetic and the graded enumeration order.

A multi-index is an n-tuple of nonnegative integers.  All dense layouts in
the package (graded matrix blocks, canonical term listings) use one fixed
linear order: indexes are graded by total weight, and within a weight class
an index with a larger entry in the earliest differing position comes
first.  For n = 2, weight 2 this reads (2,0), (1,1), (0,2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

MultiIndex = tuple  # n-tuple of nonnegative ints


@dataclass(frozen=True)
class SeriesContext:
    """Shared shape of a computation: variable count and truncation degree."""

    nvars: int
    degree_cap: int

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError(f"need at least one variable, got {self.nvars}")
        if self.degree_cap < 1:
            raise ValueError(f"truncation degree must be >= 1, got {self.degree_cap}")


def weight(alpha: MultiIndex) -> int:
    """Total degree |alpha| = sum of the entries."""
    return sum(alpha)


def compare(beta: MultiIndex, alpha: MultiIndex) -> int:
    """Three-way comparison in the graded order: -1 if beta comes before alpha.

    Lower weight comes first.  Within equal weight the index whose earliest
    differing entry is LARGER comes first, so (2,0) precedes (1,1).
    """
    if len(beta) != len(alpha):
        raise ValueError("multi-indexes have different lengths")
    wb, wa = sum(beta), sum(alpha)
    if wb != wa:
        return -1 if wb < wa else 1
    for b, a in zip(beta, alpha):
        if b != a:
            return -1 if b > a else 1
    return 0


def sort_key(alpha: MultiIndex):
    """Key function realizing the same order as :func:`compare`."""
    return (sum(alpha), tuple(-a for a in alpha))


def count_weight(nvars: int, p: int) -> int:
    """Number of multi-indexes of weight p in nvars variables."""
    if p < 0:
        return 0
    return math.comb(p + nvars - 1, nvars - 1)


@lru_cache(maxsize=None)
def _enumerate(nvars: int, p: int) -> tuple:
    if nvars == 1:
        return ((p,),)
    out = []
    for lead in range(p, -1, -1):
        for rest in _enumerate(nvars - 1, p - lead):
            out.append((lead,) + rest)
    return tuple(out)


def enumerate_weight(ctx: SeriesContext, p: int) -> tuple:
    """All multi-indexes of weight p, in the graded order."""
    if p < 0:
        raise ValueError(f"weight must be nonnegative, got {p}")
    return _enumerate(ctx.nvars, p)


def all_of_weight(nvars: int, p: int) -> tuple:
    """Context-free variant of :func:`enumerate_weight`."""
    if p < 0:
        raise ValueError(f"weight must be nonnegative, got {p}")
    return _enumerate(nvars, p)


def rank_table(nvars: int, p: int) -> dict:
    """Multi-index -> rank lookup for one weight class.  Treat as read-only."""
    return _rank_table(nvars, p)


def unit_index(nvars: int, j: int) -> MultiIndex:
    """The multi-index with a single 1 in 0-based position j."""
    e = [0] * nvars
    e[j] = 1
    return tuple(e)


@lru_cache(maxsize=None)
def _rank_table(nvars: int, p: int) -> dict:
    return {a: i for i, a in enumerate(_enumerate(nvars, p))}


def rank_in_weight(alpha: MultiIndex) -> int:
    """Position of alpha among indexes of its own weight, in enumeration order."""
    if any(e < 0 for e in alpha):
        raise ValueError(f"negative entry in multi-index {alpha}")
    return _rank_table(len(alpha), sum(alpha))[alpha]


def unrank(ctx: SeriesContext, p: int, r: int) -> MultiIndex:
    """Inverse of :func:`rank_in_weight` for weight p."""
    table = enumerate_weight(ctx, p)
    if not 0 <= r < len(table):
        raise ValueError(f"rank {r} out of range for weight {p}")
    return table[r]


def iter_weights(ctx: SeriesContext) -> Iterator[int]:
    """Weights 1..degree_cap, the grades a truncated map can carry."""
    return iter(range(1, ctx.degree_cap + 1))


def divides(beta: MultiIndex, alpha: MultiIndex) -> bool:
    """Componentwise beta <= alpha, i.e. x^beta divides x^alpha."""
    return all(b <= a for b, a in zip(beta, alpha))


def add(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    return tuple(a + b for a, b in zip(alpha, beta))


def sub(alpha: MultiIndex, beta: MultiIndex) -> MultiIndex:
    """Componentwise difference; beta must divide alpha."""
    if not divides(beta, alpha):
        raise ValueError(f"{beta} does not divide {alpha}")
    return tuple(a - b for a, b in zip(alpha, beta))


def factorial(alpha: MultiIndex) -> int:
    """alpha! = product of entrywise factorials."""
    out = 1
    for a in alpha:
        out *= math.factorial(a)
    return out


def binomial(alpha: MultiIndex, beta: MultiIndex) -> int:
    """Product of entrywise binomial coefficients; beta must divide alpha."""
    if not divides(beta, alpha):
        raise ValueError(f"{beta} does not divide {alpha}")
    out = 1
    for a, b in zip(alpha, beta):
        out *= math.comb(a, b)
    return out
