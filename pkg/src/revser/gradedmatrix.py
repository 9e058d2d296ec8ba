"""Graded matrix blocks and the symmetric-product block calculus.

A graded block of grade (p', p) is a dense matrix whose rows are indexed
by the multi-indexes of weight p' and columns by those of weight p, both
in the canonical enumeration order.  Blocks combine in two ways:

* the symmetric product, a commutative convolution that adds grades:
  the entry of A (*) B at (row a', col a) sums, over all splittings
  a = b + c of the column index with b in A's column grade, the value
  binom(a, b) * A[b'][b] * B[a'-b'][a-b];
* the ordinary matrix product, defined when the left column grade equals
  the right row grade.

A block matrix is a grade-indexed sparse collection of blocks, truncated
so that both grades stay within the context's degree cap.  Every matrix
built from a zero-constant-term map has row grade >= column grade in all
blocks, and that property is preserved by sums and both products, which
is what makes truncation at the cap exact: discarded blocks can never
flow back into retained grades.

The bridge to series maps stores the raw coefficients of component j of
the map in column j of the grade-(p, 1) block, one block per degree p.
Composition of maps then turns into the ordinary product against the
symmetric-product exponential of the inner map's matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .coefficients import ONE, ZERO, Fraction
from .errors import ConstantTermError, ContextMismatchError, PreconditionError
from .multiindex import (
    SeriesContext,
    all_of_weight,
    count_weight,
    rank_table,
)
from .series import TruncatedSeriesMap

Grade = tuple  # (row_weight, col_weight)


@dataclass(frozen=True)
class GradedBlock:
    nvars: int
    row_weight: int
    col_weight: int
    entries: tuple  # dense, rows x cols of Fraction

    def shape(self) -> tuple:
        return (len(self.entries), len(self.entries[0]))


def _freeze(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def _zero_rows(nvars: int, rw: int, cw: int):
    return [[ZERO] * count_weight(nvars, cw) for _ in range(count_weight(nvars, rw))]


def make_block(nvars: int, row_weight: int, col_weight: int, rows) -> GradedBlock:
    """Validating factory: checks shape and coerces entries."""
    if row_weight < 0 or col_weight < 0:
        raise ValueError("grades must be nonnegative")
    want_r, want_c = count_weight(nvars, row_weight), count_weight(nvars, col_weight)
    rows = [[Fraction(v) for v in row] for row in rows]
    if len(rows) != want_r or any(len(r) != want_c for r in rows):
        raise ValueError(
            f"grade ({row_weight},{col_weight}) in {nvars} variables "
            f"needs a {want_r}x{want_c} block"
        )
    return GradedBlock(nvars, row_weight, col_weight, _freeze(rows))


def zero_block(nvars: int, row_weight: int, col_weight: int) -> GradedBlock:
    return GradedBlock(
        nvars, row_weight, col_weight, _freeze(_zero_rows(nvars, row_weight, col_weight))
    )


def identity_block(nvars: int, weight: int) -> GradedBlock:
    m = count_weight(nvars, weight)
    rows = [[ONE if i == j else ZERO for j in range(m)] for i in range(m)]
    return GradedBlock(nvars, weight, weight, _freeze(rows))


def block_is_zero(b: GradedBlock) -> bool:
    return all(not v for row in b.entries for v in row)


def block_add(a: GradedBlock, b: GradedBlock) -> GradedBlock:
    if (a.nvars, a.row_weight, a.col_weight) != (b.nvars, b.row_weight, b.col_weight):
        raise ValueError("blocks have different grades")
    rows = [
        [x + y for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)
    ]
    return GradedBlock(a.nvars, a.row_weight, a.col_weight, _freeze(rows))


def block_scale(a: GradedBlock, c) -> GradedBlock:
    c = Fraction(c)
    rows = [[c * v for v in row] for row in a.entries]
    return GradedBlock(a.nvars, a.row_weight, a.col_weight, _freeze(rows))


@lru_cache(maxsize=None)
def _pair_binomial(beta, gamma) -> int:
    # binom(beta + gamma, beta), the splitting multiplicity of Definition 1
    out = 1
    for b, g in zip(beta, gamma):
        out *= math.comb(b + g, b)
    return out


def sym_product_block(A: GradedBlock, B: GradedBlock) -> GradedBlock:
    """Symmetric product of two blocks; grades add."""
    if A.nvars != B.nvars:
        raise ValueError("blocks over different variable counts")
    n = A.nvars
    rw, cw = A.row_weight + B.row_weight, A.col_weight + B.col_weight
    rowsA, colsA = all_of_weight(n, A.row_weight), all_of_weight(n, A.col_weight)
    rowsB, colsB = all_of_weight(n, B.row_weight), all_of_weight(n, B.col_weight)
    rrank, crank = rank_table(n, rw), rank_table(n, cw)
    out = _zero_rows(n, rw, cw)
    for ia, arow in enumerate(A.entries):
        ra = rowsA[ia]
        for ja, a in enumerate(arow):
            if not a:
                continue
            ca = colsA[ja]
            for ib, brow in enumerate(B.entries):
                orow = out[rrank[tuple(x + y for x, y in zip(ra, rowsB[ib]))]]
                for jb, b in enumerate(brow):
                    if not b:
                        continue
                    cb = colsB[jb]
                    j = crank[tuple(x + y for x, y in zip(ca, cb))]
                    orow[j] += _pair_binomial(ca, cb) * a * b
    return GradedBlock(n, rw, cw, _freeze(out))


def matmul_block(A: GradedBlock, B: GradedBlock) -> GradedBlock:
    """Ordinary product; A's column grade must equal B's row grade."""
    if A.nvars != B.nvars:
        raise ValueError("blocks over different variable counts")
    if A.col_weight != B.row_weight:
        raise ValueError(
            f"cannot chain grades ({A.row_weight},{A.col_weight}) and "
            f"({B.row_weight},{B.col_weight})"
        )
    out = _zero_rows(A.nvars, A.row_weight, B.col_weight)
    for i, arow in enumerate(A.entries):
        orow = out[i]
        for k, a in enumerate(arow):
            if not a:
                continue
            for j, b in enumerate(B.entries[k]):
                if b:
                    orow[j] += a * b
    return GradedBlock(A.nvars, A.row_weight, B.col_weight, _freeze(out))


@dataclass(frozen=True)
class BlockMatrix:
    """Sparse-by-grade collection of blocks, truncated at ctx.degree_cap.

    All-zero blocks are never stored, so dataclass equality is canonical.
    """

    ctx: SeriesContext
    blocks: dict  # Grade -> GradedBlock

    def block(self, row_weight: int, col_weight: int) -> GradedBlock:
        got = self.blocks.get((row_weight, col_weight))
        if got is None:
            return zero_block(self.ctx.nvars, row_weight, col_weight)
        return got

    def grades(self) -> Iterator[Grade]:
        return iter(sorted(self.blocks))


def _bm(ctx: SeriesContext, blocks: dict) -> BlockMatrix:
    return BlockMatrix(ctx, {g: b for g, b in blocks.items() if not block_is_zero(b)})


def block_matrix(ctx: SeriesContext, blocks: dict) -> BlockMatrix:
    """Validating factory for a block matrix."""
    clean = {}
    for grade, b in blocks.items():
        rw, cw = grade
        if b.nvars != ctx.nvars:
            raise ContextMismatchError(
                f"block over {b.nvars} variables in a {ctx.nvars}-variable matrix"
            )
        if (b.row_weight, b.col_weight) != (rw, cw):
            raise ValueError(f"block of grade ({b.row_weight},{b.col_weight}) stored at {grade}")
        if rw < 0 or cw < 0 or rw > ctx.degree_cap or cw > ctx.degree_cap:
            raise ValueError(f"grade {grade} outside cap {ctx.degree_cap}")
        if not block_is_zero(b):
            clean[(rw, cw)] = b
    return BlockMatrix(ctx, clean)


def mat_one(ctx: SeriesContext) -> BlockMatrix:
    """Identity of the symmetric product: scalar 1 at grade (0, 0)."""
    return BlockMatrix(ctx, {(0, 0): make_block(ctx.nvars, 0, 0, [[ONE]])})


def linear_identity(ctx: SeriesContext) -> BlockMatrix:
    """Single identity block at grade (1, 1): the matrix of the identity map."""
    return BlockMatrix(ctx, {(1, 1): identity_block(ctx.nvars, 1)})


def full_identity(ctx: SeriesContext) -> BlockMatrix:
    """Identity of the ordinary product: identity blocks at every grade (p, p)."""
    return BlockMatrix(
        ctx,
        {(p, p): identity_block(ctx.nvars, p) for p in range(ctx.degree_cap + 1)},
    )


def bm_add(A: BlockMatrix, B: BlockMatrix) -> BlockMatrix:
    if A.ctx != B.ctx:
        raise ContextMismatchError(f"contexts differ: {A.ctx} vs {B.ctx}")
    out = dict(A.blocks)
    for g, b in B.blocks.items():
        got = out.get(g)
        out[g] = b if got is None else block_add(got, b)
    return _bm(A.ctx, out)


def bm_scale(A: BlockMatrix, c) -> BlockMatrix:
    c = Fraction(c)
    if not c:
        return BlockMatrix(A.ctx, {})
    return BlockMatrix(A.ctx, {g: block_scale(b, c) for g, b in A.blocks.items()})


def bm_sub(A: BlockMatrix, B: BlockMatrix) -> BlockMatrix:
    return bm_add(A, bm_scale(B, -1))


def sym_product(A: BlockMatrix, B: BlockMatrix) -> BlockMatrix:
    """Symmetric product of block matrices: gradewise convolution."""
    if A.ctx != B.ctx:
        raise ContextMismatchError(f"contexts differ: {A.ctx} vs {B.ctx}")
    cap = A.ctx.degree_cap
    out: dict = {}
    for (ra, ca), a in A.blocks.items():
        for (rb, cb), b in B.blocks.items():
            g = (ra + rb, ca + cb)
            if g[0] > cap or g[1] > cap:
                continue
            p = sym_product_block(a, b)
            got = out.get(g)
            out[g] = p if got is None else block_add(got, p)
    return _bm(A.ctx, out)


def sym_power(A: BlockMatrix, m: int) -> BlockMatrix:
    """m-th symmetric-product power; m = 0 gives mat_one."""
    if m < 0:
        raise ValueError(f"power must be >= 0, got {m}")
    acc = mat_one(A.ctx)
    for _ in range(m):
        acc = sym_product(acc, A)
    return acc


def sym_exp(A: BlockMatrix) -> BlockMatrix:
    """Symmetric-product exponential: sum of A**i / i! over the new product.

    Requires every block of A to sit at strictly positive grades; each
    extra factor then raises the minimum grade, so the series leaves the
    truncation window after at most degree_cap factors and the sum is
    finite and exact.
    """
    for rw, cw in A.blocks:
        if rw < 1 or cw < 1:
            raise PreconditionError(
                "exponential needs all blocks at strictly positive grades, "
                f"found grade ({rw},{cw})"
            )
    acc = dict(mat_one(A.ctx).blocks)
    pw = mat_one(A.ctx)
    for i in range(1, A.ctx.degree_cap + 2):
        pw = bm_scale(sym_product(pw, A), Fraction(1, i))
        if not pw.blocks:
            break
        for g, b in pw.blocks.items():
            got = acc.get(g)
            acc[g] = b if got is None else block_add(got, b)
    return _bm(A.ctx, acc)


def matrix_mul(A: BlockMatrix, B: BlockMatrix) -> BlockMatrix:
    """Ordinary block-matrix product, summing over the shared middle grade."""
    if A.ctx != B.ctx:
        raise ContextMismatchError(f"contexts differ: {A.ctx} vs {B.ctx}")
    by_row: dict = {}
    for (rb, cb), b in B.blocks.items():
        by_row.setdefault(rb, []).append((cb, b))
    out: dict = {}
    for (ra, ca), a in A.blocks.items():
        for cb, b in by_row.get(ca, ()):
            g = (ra, cb)
            p = matmul_block(a, b)
            got = out.get(g)
            out[g] = p if got is None else block_add(got, p)
    return _bm(A.ctx, out)


def matrix_power(A: BlockMatrix, m: int) -> BlockMatrix:
    """m-th ordinary power; m = 0 gives full_identity."""
    if m < 0:
        raise ValueError(f"power must be >= 0, got {m}")
    acc = full_identity(A.ctx)
    for _ in range(m):
        acc = matrix_mul(acc, A)
    return acc


def from_series(f: TruncatedSeriesMap) -> BlockMatrix:
    """Matrix of a map: column j of the grade-(p, 1) block holds the raw
    degree-p coefficients of component j."""
    ctx = f.ctx
    n = ctx.nvars
    rows_by_weight: dict = {}
    for j, comp in enumerate(f.components):
        for e, c in comp.items():
            p = sum(e)
            rows = rows_by_weight.get(p)
            if rows is None:
                rows = rows_by_weight[p] = _zero_rows(n, p, 1)
            rows[rank_table(n, p)[e]][j] = c
    blocks = {
        (p, 1): GradedBlock(n, p, 1, _freeze(rows))
        for p, rows in rows_by_weight.items()
    }
    return _bm(ctx, blocks)


def to_series(M: BlockMatrix) -> TruncatedSeriesMap:
    """Inverse of from_series; the matrix must be in map form.

    Map form means all blocks sit at grades (p, 1).  A nonzero block at
    grade (0, 1) would be a constant term and is rejected.
    """
    ctx = M.ctx
    n = ctx.nvars
    comps: list = [dict() for _ in range(n)]
    for (rw, cw), b in M.blocks.items():
        if cw != 1:
            raise PreconditionError(
                f"matrix is not in map form: block at grade ({rw},{cw})"
            )
        if rw == 0:
            raise ConstantTermError("matrix carries a constant term")
        idx = all_of_weight(n, rw)
        for i, row in enumerate(b.entries):
            for j, v in enumerate(row):
                if v:
                    comps[j][idx[i]] = v
    return TruncatedSeriesMap(ctx, tuple(comps))


def compose_via_matrix(
    outer: TruncatedSeriesMap, inner: TruncatedSeriesMap
) -> TruncatedSeriesMap:
    """Composition computed in matrix form: the matrix of outer-after-inner
    is the exponential of the inner matrix times the outer matrix."""
    if outer.ctx != inner.ctx:
        raise ContextMismatchError(f"contexts differ: {outer.ctx} vs {inner.ctx}")
    return to_series(matrix_mul(sym_exp(from_series(inner)), from_series(outer)))


def matrix_of_iterate(f: TruncatedSeriesMap, m: int) -> BlockMatrix:
    """Matrix of the m-th self-composition, computed without composing:
    the m-th ordinary power of the exponential, applied to the matrix of
    the identity map."""
    if m < 0:
        raise ValueError(f"iteration count must be >= 0, got {m}")
    E = sym_exp(from_series(f))
    return matrix_mul(matrix_power(E, m), linear_identity(f.ctx))


def dump_entries(M: BlockMatrix) -> Iterator[tuple]:
    """Nonzero entries as (row_weight, col_weight, row_index, col_index,
    value), in canonical order."""
    n = M.ctx.nvars
    for rw, cw in sorted(M.blocks):
        b = M.blocks[(rw, cw)]
        rows, cols = all_of_weight(n, rw), all_of_weight(n, cw)
        for i, row in enumerate(b.entries):
            for j, v in enumerate(row):
                if v:
                    yield rw, cw, rows[i], cols[j], v
