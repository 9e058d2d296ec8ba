"""Compositional inversion of unit-tangent truncated series maps.

Three routes to the same inverse, kept deliberately independent so they
can cross-check each other:

* invert_neumann sums the alternating-iterate difference sequence.  The
  m-th term T_m = sum_k (-1)^k binom(m, k) f^(k) has order at least
  m + 1 (checked at runtime, not assumed), so terms beyond m = D - 1
  cannot touch the truncation window and the sum is finite and exact.
* invert_recurrence solves for the inverse's matrix blocks degree by
  degree: the grade-(m, 1) block is determined by lower blocks through a
  partition-indexed convolution of symmetric powers of the forward
  blocks.
* invert_fixpoint iterates psi <- id - tail(f) o psi, which gains one
  settled degree per pass and therefore needs exactly degree_cap passes.

The hand-checkable anchor for the recurrence, written out for
f = x + x^2 in one variable at cap 4.  The forward blocks are W1 = [1]
and W2 = [1] (higher ones zero), the inverse blocks N_m sit at grade
(m, 1), and S(m, k) below is the partition convolution defined in
invert_recurrence:

    N1 = W1 = [1]
    N2 = -S(2,1) N1 = -[1]                    (partition 2 = 2, S = W2)
    N3 = -S(3,2) N2 = -[2] [-1] = [2]         (3 = 2+1, S = W1 (*) W2 = [2])
    N4 = -(S(4,2) N2 + S(4,3) N3)
       = -([1] [-1] + [3] [2]) = [-5]         (4 = 2+2 gives W2^(*)2 / 2! = [1];
                                               4 = 2+1+1 gives W1^(*)2 (*) W2 / 2! = [3])

The coefficients 1, -1, 2, -5 continue as signed Catalan numbers, which
is the golden test shared by all three routes.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache

from .errors import (
    NonIdentityLinearPartError,
    SingularLinearPartError,
    VerificationError,
)
from .gradedmatrix import (
    BlockMatrix,
    block_add,
    block_is_zero,
    block_scale,
    from_series,
    identity_block,
    matmul_block,
    sym_product_block,
    to_series,
)
from .series import (
    TruncatedSeriesMap,
    add_maps,
    compose,
    has_identity_linear_part,
    identity_map,
    linear_map,
    linear_part,
    order,
    sub_maps,
    tail_part,
    zero_map,
)

__all__ = [
    "DifferenceSequence",
    "INVERSION_METHODS",
    "check_tail_telescope",
    "difference_term",
    "invert",
    "invert_fixpoint",
    "invert_general",
    "invert_neumann",
    "invert_recurrence",
    "require_unit_tangent",
]


def require_unit_tangent(f: TruncatedSeriesMap) -> TruncatedSeriesMap:
    """Pass f through if its linear part is the identity, else raise."""
    if not has_identity_linear_part(f):
        raise NonIdentityLinearPartError(
            "linear part is not the identity", linear_part(f)
        )
    return f


class DifferenceSequence:
    """Memoized terms of the alternating-iterate telescope.

    T_0 is the identity and T_{m+1} = T_m - T_m o f, which closes to
    T_m = sum_{k=0}^m (-1)^k binom(m, k) f^(k).  Extension is guarded by
    a lock so a shared sequence can be grown from several threads.
    """

    def __init__(self, f: TruncatedSeriesMap):
        self.base = f
        self._terms = [identity_map(f.ctx)]
        self._lock = threading.Lock()

    def term(self, m: int) -> TruncatedSeriesMap:
        if m < 0:
            raise ValueError(f"term index must be >= 0, got {m}")
        with self._lock:
            while len(self._terms) <= m:
                t = self._terms[-1]
                self._terms.append(sub_maps(t, compose(t, self.base)))
            return self._terms[m]


def difference_term(f: TruncatedSeriesMap, m: int) -> TruncatedSeriesMap:
    return DifferenceSequence(f).term(m)


def invert_neumann(f: TruncatedSeriesMap) -> TruncatedSeriesMap:
    """Inverse as identity plus the sum of all difference terms.

    Truncation soundness rests on order(T_m) >= m + 1; rather than trust
    the derivation, the bound is rechecked on every term so a violation
    surfaces as an error instead of silently wrong output.
    """
    require_unit_tangent(f)
    ctx = f.ctx
    seq = DifferenceSequence(f)
    acc = identity_map(ctx)
    for m in range(1, ctx.degree_cap):
        t = seq.term(m)
        if order(t) < m + 1:
            raise VerificationError(
                f"difference term {m} has order {order(t)}, expected >= {m + 1}"
            )
        acc = add_maps(acc, t)
    return acc


@lru_cache(maxsize=None)
def _partitions(m: int, k: int, max_part: int) -> tuple:
    """Partitions of m into exactly k parts, each <= max_part, as sorted
    (part, multiplicity) tuples."""
    if k == 0:
        return ((),) if m == 0 else ()
    if m < k:
        return ()
    out = []
    for lead in range(min(m - k + 1, max_part), 0, -1):
        # use j copies of `lead`, then strictly smaller parts
        for j in range(1, k + 1):
            rest = m - lead * j
            if rest < 0:
                break
            for tail in _partitions(rest, k - j, lead - 1):
                out.append(((lead, j),) + tail)
    return tuple(out)


def invert_recurrence(f: TruncatedSeriesMap) -> TruncatedSeriesMap:
    """Inverse via the block recurrence on the matrix of the inverse.

    Writing W_p for the grade-(p, 1) forward block and N_m for the
    inverse's grade-(m, 1) block, the grade-(m, 1) slice of
    exp(matrix of f) * (matrix of inverse) = matrix of identity
    gives, for m > 1,

        N_m = - sum_{k=1}^{m-1} S(m, k) N_k,   N_1 = W_1,

    where S(m, k) sums, over all partitions of m into k parts, the
    symmetric-product powers of the forward blocks picked by the
    partition, divided by the product of multiplicity factorials.
    S(m, k) is exactly the grade-(m, k) block of the exponential.
    """
    require_unit_tangent(f)
    ctx = f.ctx
    n, cap = ctx.nvars, ctx.degree_cap
    W = {p: b for (p, _), b in from_series(f).blocks.items()}

    spow: dict = {}

    def sym_pow(j: int, a: int):
        got = spow.get((j, a))
        if got is None:
            got = W[j] if a == 1 else sym_product_block(sym_pow(j, a - 1), W[j])
            spow[(j, a)] = got
        return got

    N: dict = {1: identity_block(n, 1)}
    for m in range(2, cap + 1):
        acc = None
        for k in range(1, m):
            Nk = N.get(k)
            if Nk is None:
                continue
            S = None
            for parts in _partitions(m, k, m):
                if any(j not in W for j, _ in parts):
                    continue
                P = None
                denom = 1
                for j, mult in parts:
                    denom *= math.factorial(mult)
                    q = sym_pow(j, mult)
                    P = q if P is None else sym_product_block(P, q)
                P = block_scale(P, Fraction(1, denom))
                S = P if S is None else block_add(S, P)
            if S is None or block_is_zero(S):
                continue
            term = matmul_block(S, Nk)
            acc = term if acc is None else block_add(acc, term)
        if acc is not None and not block_is_zero(acc):
            N[m] = block_scale(acc, -1)
    blocks = {(m, 1): b for m, b in N.items() if not block_is_zero(b)}
    return to_series(BlockMatrix(ctx, blocks))


def invert_fixpoint(f: TruncatedSeriesMap) -> TruncatedSeriesMap:
    """Inverse as the fixed point of psi = id - tail(f) o psi.

    Each pass settles one more degree (the start value is already right
    in degree 1), so degree_cap passes reach the cap with one to spare.
    """
    require_unit_tangent(f)
    ctx = f.ctx
    ident = identity_map(ctx)
    H = tail_part(f)
    psi = ident
    for _ in range(ctx.degree_cap):
        psi = sub_maps(ident, compose(H, psi))
    return psi


INVERSION_METHODS = {
    "neumann": invert_neumann,
    "recurrence": invert_recurrence,
    "fixpoint": invert_fixpoint,
}


def invert(f: TruncatedSeriesMap, method: str = "neumann") -> TruncatedSeriesMap:
    try:
        fn = INVERSION_METHODS[method]
    except KeyError:
        raise ValueError(f"unknown inversion method {method!r}") from None
    return fn(f)


def check_tail_telescope(f: TruncatedSeriesMap, m0: int) -> bool:
    """Check that term m0 equals the sum over m >= m0 of T_m o f.

    The tail is finite under truncation because order(T_m) >= m + 1, so
    the sum stops at m = degree_cap - 1.  Hand anchor for f = x + x^2 at
    cap 4 and m0 = 1: the terms are T_1 = -x^2, T_2 = 2x^3 + x^4,
    T_3 = -6x^4, their compositions with f are -x^2 - 2x^3 - x^4,
    2x^3 + 7x^4, and -6x^4, and the sum collapses to -x^2 = T_1.
    """
    if m0 < 0:
        raise ValueError(f"m0 must be >= 0, got {m0}")
    require_unit_tangent(f)
    seq = DifferenceSequence(f)
    acc = zero_map(f.ctx)
    for m in range(m0, f.ctx.degree_cap):
        acc = add_maps(acc, compose(seq.term(m), f))
    return acc == seq.term(m0)


def _invert_constant_matrix(L) -> list:
    """Exact inverse of a small square matrix by Gauss-Jordan elimination."""
    n = len(L)
    aug = [[Fraction(L[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise SingularLinearPartError("linear part is not invertible")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def invert_general(f: TruncatedSeriesMap, method: str = "neumann") -> TruncatedSeriesMap:
    """Inverse for any invertible linear part.

    Splits f as (linear part) o (unit-tangent map), inverts the
    unit-tangent factor with the requested method, and chains the two
    inverses back together.
    """
    L = linear_part(f)
    K = _invert_constant_matrix(L)
    Linv = linear_map(f.ctx, K)
    g = compose(Linv, f)
    return compose(invert(g, method), Linv)
