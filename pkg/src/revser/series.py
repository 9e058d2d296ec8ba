"""Truncated multivariate formal power series maps.

A map keeps one scalar series per component.  Every series has zero
constant term and is truncated at the shared degree cap, so the data is a
finite dict from exponent tuple to nonzero rational coefficient.  All
arithmetic is exact.

Composition is the workhorse: the inner map is substituted into each
monomial of the outer map, with a per-call cache of monomial powers so
that repeated exponent patterns are only expanded once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .coefficients import ONE, Fraction
from .errors import ConstantTermError, ContextMismatchError, FormatError
from .multiindex import MultiIndex, SeriesContext, sort_key

Terms = dict  # MultiIndex -> Fraction, zero values never stored


@dataclass(frozen=True)
class TruncatedSeriesMap:
    """n scalar series with zero constant term, truncated at ctx.degree_cap."""

    ctx: SeriesContext
    components: tuple

    def __iter__(self) -> Iterator[Terms]:
        return iter(self.components)

    def term_count(self) -> int:
        return sum(len(c) for c in self.components)

    def coefficient(self, j: int, alpha: MultiIndex) -> Fraction:
        """Coefficient of x^alpha in component j (1-based); zero if absent."""
        return self.components[j - 1].get(tuple(alpha), Fraction(0))


def _clean(raw: Mapping) -> Terms:
    return {e: c for e, c in raw.items() if c}


def series_map(ctx: SeriesContext, components: Sequence[Mapping]) -> TruncatedSeriesMap:
    """Validating factory: coerces coefficients, drops zeros, enforces the
    zero-constant-term and degree-cap invariants."""
    if len(components) != ctx.nvars:
        raise FormatError(
            f"expected {ctx.nvars} components, got {len(components)}"
        )
    zero = (0,) * ctx.nvars
    comps = []
    for comp in components:
        clean: Terms = {}
        for e, c in comp.items():
            e = tuple(e)
            if len(e) != ctx.nvars or any(k < 0 for k in e):
                raise FormatError(f"bad exponent tuple {e} for {ctx.nvars} variables")
            c = Fraction(c)
            if not c:
                continue
            if e == zero:
                raise ConstantTermError("maps must have zero constant term")
            if sum(e) > ctx.degree_cap:
                raise FormatError(
                    f"term of degree {sum(e)} exceeds cap {ctx.degree_cap}"
                )
            clean[e] = c
        comps.append(clean)
    return TruncatedSeriesMap(ctx, tuple(comps))


def zero_map(ctx: SeriesContext) -> TruncatedSeriesMap:
    return TruncatedSeriesMap(ctx, tuple({} for _ in range(ctx.nvars)))


def identity_map(ctx: SeriesContext) -> TruncatedSeriesMap:
    comps = []
    for j in range(ctx.nvars):
        e = [0] * ctx.nvars
        e[j] = 1
        comps.append({tuple(e): ONE})
    return TruncatedSeriesMap(ctx, tuple(comps))


def linear_map(ctx: SeriesContext, matrix: Sequence[Sequence]) -> TruncatedSeriesMap:
    """Map whose component j is sum_i matrix[i][j] * x_{i+1}."""
    n = ctx.nvars
    comps = []
    for j in range(n):
        d: Terms = {}
        for i in range(n):
            c = Fraction(matrix[i][j])
            if c:
                e = [0] * n
                e[i] = 1
                d[tuple(e)] = c
        comps.append(d)
    return TruncatedSeriesMap(ctx, tuple(comps))


def _require_same_ctx(f: TruncatedSeriesMap, g: TruncatedSeriesMap) -> SeriesContext:
    if f.ctx != g.ctx:
        raise ContextMismatchError(
            f"contexts differ: {f.ctx} vs {g.ctx}"
        )
    return f.ctx


def add_maps(f: TruncatedSeriesMap, g: TruncatedSeriesMap) -> TruncatedSeriesMap:
    ctx = _require_same_ctx(f, g)
    comps = []
    for a, b in zip(f.components, g.components):
        out = dict(a)
        for e, c in b.items():
            v = out.get(e)
            nv = c if v is None else v + c
            if nv:
                out[e] = nv
            elif v is not None:
                del out[e]
        comps.append(out)
    return TruncatedSeriesMap(ctx, tuple(comps))


def scale_map(f: TruncatedSeriesMap, c) -> TruncatedSeriesMap:
    c = Fraction(c)
    if not c:
        return zero_map(f.ctx)
    return TruncatedSeriesMap(
        f.ctx, tuple({e: c * v for e, v in comp.items()} for comp in f.components)
    )


def sub_maps(f: TruncatedSeriesMap, g: TruncatedSeriesMap) -> TruncatedSeriesMap:
    return add_maps(f, scale_map(g, -1))


def order(f: TruncatedSeriesMap):
    """Smallest total degree carrying a nonzero term, or math.inf for zero maps."""
    best = math.inf
    for comp in f.components:
        for e in comp:
            w = sum(e)
            if w < best:
                best = w
    return best


def linear_part(f: TruncatedSeriesMap) -> tuple:
    """n x n matrix L with L[i][j] = coefficient of x_{i+1} in component j+1."""
    n = f.ctx.nvars
    rows = [[Fraction(0)] * n for _ in range(n)]
    for j, comp in enumerate(f.components):
        for e, c in comp.items():
            if sum(e) == 1:
                rows[e.index(1)][j] = c
    return tuple(tuple(r) for r in rows)


def has_identity_linear_part(f: TruncatedSeriesMap) -> bool:
    n = f.ctx.nvars
    L = linear_part(f)
    return all(L[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def tail_part(f: TruncatedSeriesMap) -> TruncatedSeriesMap:
    """Terms of degree >= 2 only."""
    comps = tuple(
        {e: c for e, c in comp.items() if sum(e) > 1} for comp in f.components
    )
    return TruncatedSeriesMap(f.ctx, comps)


def recap(f: TruncatedSeriesMap, degree_cap: int) -> TruncatedSeriesMap:
    """Same map under a new truncation degree.

    Lowering drops overweight terms.  Raising declares the absent higher
    terms to be exactly zero, which reads the input as a polynomial.
    """
    ctx = SeriesContext(f.ctx.nvars, degree_cap)
    comps = tuple(
        {e: c for e, c in comp.items() if sum(e) <= degree_cap}
        for comp in f.components
    )
    return TruncatedSeriesMap(ctx, comps)


def terms_in_order(f: TruncatedSeriesMap) -> Iterator[tuple]:
    """(component, exponent, coefficient) triples in canonical order."""
    for j, comp in enumerate(f.components, start=1):
        for e in sorted(comp, key=sort_key):
            yield j, e, comp[e]


def series_mul(a: Terms, b: Terms, cap) -> Terms:
    """Product of two scalar series, truncated at total degree cap.

    cap may be math.inf for exact polynomial work.
    """
    if len(a) > len(b):
        a, b = b, a
    bitems = [(e, sum(e), c) for e, c in b.items()]
    out: Terms = {}
    for ea, ca in a.items():
        room = cap - sum(ea)
        for eb, wb, cb in bitems:
            if wb > room:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e)
            nv = ca * cb if v is None else v + ca * cb
            out[e] = nv
    return {e: c for e, c in out.items() if c}


class MonomialPowerCache:
    """Per-inner-map cache of truncated monomial powers.

    power(alpha) is the scalar series for the product over j of
    inner_j ** alpha[j], built one exponent step at a time so shared
    sub-patterns are reused across calls.
    """

    def __init__(self, inner_components: Sequence[Terms], nvars: int, cap):
        self.inner = inner_components
        self.cap = cap
        zero = (0,) * nvars
        self._cache: dict = {zero: {zero: ONE}}

    def power(self, alpha: MultiIndex) -> Terms:
        got = self._cache.get(alpha)
        if got is not None:
            return got
        stack = [alpha]
        while stack:
            top = stack[-1]
            j = next(i for i, a in enumerate(top) if a)
            parent = top[:j] + (top[j] - 1,) + top[j + 1 :]
            base = self._cache.get(parent)
            if base is None:
                stack.append(parent)
                continue
            self._cache[top] = series_mul(base, self.inner[j], self.cap)
            stack.pop()
        return self._cache[alpha]


def compose_scalar(coeffs: Mapping, cache: MonomialPowerCache) -> Terms:
    """Substitute the cache's inner map into one scalar series.

    Unlike full maps, the scalar series may carry a constant term; it
    passes through unchanged.
    """
    acc: Terms = {}
    for alpha, c in coeffs.items():
        for e, pc in cache.power(alpha).items():
            v = acc.get(e)
            nv = c * pc if v is None else v + c * pc
            acc[e] = nv
    return {e: c for e, c in acc.items() if c}


def compose(outer: TruncatedSeriesMap, inner: TruncatedSeriesMap) -> TruncatedSeriesMap:
    """outer after inner: substitute inner into every component of outer."""
    ctx = _require_same_ctx(outer, inner)
    cache = MonomialPowerCache(inner.components, ctx.nvars, ctx.degree_cap)
    comps = tuple(compose_scalar(comp, cache) for comp in outer.components)
    return TruncatedSeriesMap(ctx, comps)


def iterate(f: TruncatedSeriesMap, k: int) -> TruncatedSeriesMap:
    """k-fold self-composition; k = 0 gives the identity map."""
    if k < 0:
        raise ValueError(f"iteration count must be >= 0, got {k}")
    acc = identity_map(f.ctx)
    for _ in range(k):
        acc = compose(acc, f)
    return acc


@dataclass(frozen=True)
class SeriesGrid:
    """Square matrix of scalar series, truncated at an explicit cap.

    Used for Jacobian matrices, whose entries may carry constant terms and
    are therefore not maps themselves.
    """

    nvars: int
    cap: int
    entries: tuple  # n x n tuple of Terms

    def entry(self, i: int, j: int) -> Terms:
        return self.entries[i][j]


def jacobian(f: TruncatedSeriesMap) -> SeriesGrid:
    """Matrix of partial derivatives: entry (i, j) is d(component j)/dx_i.

    Differentiation lowers degree by one, so entries are complete up to
    degree cap - 1.
    """
    n = f.ctx.nvars
    grid = [[{} for _ in range(n)] for _ in range(n)]
    for j, comp in enumerate(f.components):
        for e, c in comp.items():
            for i, a in enumerate(e):
                if a:
                    de = e[:i] + (a - 1,) + e[i + 1 :]
                    cell = grid[i][j]
                    v = cell.get(de)
                    nv = c * a if v is None else v + c * a
                    cell[de] = nv
    entries = tuple(tuple(_clean(cell) for cell in row) for row in grid)
    return SeriesGrid(n, f.ctx.degree_cap - 1, entries)


def grid_identity(nvars: int, cap: int) -> SeriesGrid:
    zero = (0,) * nvars
    entries = tuple(
        tuple(({zero: ONE} if i == j else {}) for j in range(nvars))
        for i in range(nvars)
    )
    return SeriesGrid(nvars, cap, entries)


def grid_mul(A: SeriesGrid, B: SeriesGrid, cap=None) -> SeriesGrid:
    """Matrix product with truncated scalar-series entry arithmetic."""
    n = A.nvars
    if cap is None:
        cap = min(A.cap, B.cap)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc: Terms = {}
            for k in range(n):
                a, b = A.entries[i][k], B.entries[k][j]
                if not a or not b:
                    continue
                for e, c in series_mul(a, b, cap).items():
                    v = acc.get(e)
                    acc[e] = c if v is None else v + c
            row.append(_clean(acc))
        rows.append(tuple(row))
    return SeriesGrid(n, cap, tuple(rows))


def grid_add(A: SeriesGrid, B: SeriesGrid) -> SeriesGrid:
    n = A.nvars
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            out = dict(A.entries[i][j])
            for e, c in B.entries[i][j].items():
                v = out.get(e)
                nv = c if v is None else v + c
                if nv:
                    out[e] = nv
                elif v is not None:
                    del out[e]
            row.append(out)
        rows.append(tuple(row))
    return SeriesGrid(n, min(A.cap, B.cap), tuple(rows))


def grid_scale(A: SeriesGrid, c) -> SeriesGrid:
    c = Fraction(c)
    rows = tuple(
        tuple(({e: c * v for e, v in cell.items()} if c else {}) for cell in row)
        for row in A.entries
    )
    return SeriesGrid(A.nvars, A.cap, rows)


def grid_sub(A: SeriesGrid, B: SeriesGrid) -> SeriesGrid:
    return grid_add(A, grid_scale(B, -1))


def grid_compose(A: SeriesGrid, inner: TruncatedSeriesMap, cap=None) -> SeriesGrid:
    """Substitute a map into every entry of the grid."""
    if cap is None:
        cap = A.cap
    cache = MonomialPowerCache(inner.components, A.nvars, cap)
    rows = tuple(
        tuple(compose_scalar(cell, cache) for cell in row) for row in A.entries
    )
    return SeriesGrid(A.nvars, cap, rows)


def grid_is_zero(A: SeriesGrid) -> bool:
    return all(not cell for row in A.entries for cell in row)


def random_map(ctx: SeriesContext, rng, *, tail_degree: int | None = None,
               coeff_bound: int = 3) -> TruncatedSeriesMap:
    """Identity linear part plus a random polynomial tail.

    Tail coefficients are integers drawn uniformly from
    [-coeff_bound, coeff_bound]; zero draws leave the monomial out, giving
    natural sparsity.  Deterministic for a given rng state.
    """
    from .multiindex import enumerate_weight

    n, cap = ctx.nvars, ctx.degree_cap
    if tail_degree is None:
        tail_degree = min(3, cap)
    tail_degree = min(tail_degree, cap)
    comps = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        d: Terms = {tuple(e): ONE}
        for p in range(2, tail_degree + 1):
            for alpha in enumerate_weight(ctx, p):
                c = rng.randint(-coeff_bound, coeff_bound)
                if c:
                    d[alpha] = Fraction(c)
        comps.append(d)
    return TruncatedSeriesMap(ctx, tuple(comps))
