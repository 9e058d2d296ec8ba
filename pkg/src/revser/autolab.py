"""Exact polynomial-map experiments on tail vanishing and invertibility.

The open problem driving this module: when a polynomial map with
identity linear part has a polynomial compositional inverse, do the
difference terms T_m of its inversion series vanish identically from
some index m0 on?  A vanishing tail yields the inverse as the finite
polynomial x + T_1 + ... + T_{m0-1}, so the question ties polynomial
invertibility to a finite certificate.

Everything here runs UNTRUNCATED: tail vanishing is a statement about
exact polynomials, and truncating could fabricate false positives.  The
price is degree growth like deg(f)^m, so every composition is guarded by
resource caps that abort with a distinct error instead of truncating.

The module gathers evidence only; it never claims an answer to the
general question.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .coefficients import ONE, Fraction
from .errors import (
    ConstantTermError,
    ContextMismatchError,
    FormatError,
    NonIdentityLinearPartError,
    PreconditionError,
    ResourceCapError,
    VerificationError,
)
from .multiindex import SeriesContext, unit_index
from .series import (
    MonomialPowerCache,
    SeriesGrid,
    TruncatedSeriesMap,
    compose,
    compose_scalar,
    grid_add,
    grid_compose,
    grid_identity,
    grid_is_zero,
    grid_mul,
    grid_scale,
    grid_sub,
    series_map,
)

Terms = dict


@dataclass(frozen=True)
class PolynomialMap:
    """n polynomial components with zero constant term and no degree cap."""

    nvars: int
    components: tuple

    def term_count(self) -> int:
        return sum(len(c) for c in self.components)


@dataclass(frozen=True)
class ResourceCaps:
    """Hard limits for exact composition; exceeding either aborts."""

    max_degree: int = 512
    max_terms: int = 200_000


DEFAULT_CAPS = ResourceCaps()


def polynomial_map(nvars: int, components: Sequence[Mapping]) -> PolynomialMap:
    """Validating factory mirroring series_map, minus the degree cap."""
    if len(components) != nvars:
        raise FormatError(f"expected {nvars} components, got {len(components)}")
    zero = (0,) * nvars
    comps = []
    for comp in components:
        clean: Terms = {}
        for e, c in comp.items():
            e = tuple(e)
            if len(e) != nvars or any(k < 0 for k in e):
                raise FormatError(f"bad exponent tuple {e} for {nvars} variables")
            c = Fraction(c)
            if not c:
                continue
            if e == zero:
                raise ConstantTermError("maps must have zero constant term")
            clean[e] = c
        comps.append(clean)
    return PolynomialMap(nvars, tuple(comps))


def poly_identity(nvars: int) -> PolynomialMap:
    return PolynomialMap(
        nvars, tuple({unit_index(nvars, j): ONE} for j in range(nvars))
    )


def poly_is_zero(f: PolynomialMap) -> bool:
    return all(not c for c in f.components)


def poly_degree(f: PolynomialMap) -> int:
    """Largest total degree of any term; 0 for the zero map."""
    return max((sum(e) for c in f.components for e in c), default=0)


def poly_add(f: PolynomialMap, g: PolynomialMap) -> PolynomialMap:
    if f.nvars != g.nvars:
        raise ContextMismatchError("maps over different variable counts")
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
    return PolynomialMap(f.nvars, tuple(comps))


def poly_scale(f: PolynomialMap, c) -> PolynomialMap:
    c = Fraction(c)
    if not c:
        return PolynomialMap(f.nvars, tuple({} for _ in range(f.nvars)))
    return PolynomialMap(
        f.nvars, tuple({e: c * v for e, v in comp.items()} for comp in f.components)
    )


def poly_sub(f: PolynomialMap, g: PolynomialMap) -> PolynomialMap:
    return poly_add(f, poly_scale(g, -1))


def poly_compose(
    f: PolynomialMap, g: PolynomialMap, caps: ResourceCaps = DEFAULT_CAPS
) -> PolynomialMap:
    """Exact composition f after g, guarded by resource caps.

    The degree guard fires on the conservative bound deg(f) * deg(g)
    before any work happens, so a doomed computation never starts.
    """
    if f.nvars != g.nvars:
        raise ContextMismatchError("maps over different variable counts")
    projected = poly_degree(f) * poly_degree(g)
    if projected > caps.max_degree:
        raise ResourceCapError(
            f"composition could reach degree {projected}, cap is {caps.max_degree}",
            cap="max_degree",
        )
    cache = MonomialPowerCache(g.components, f.nvars, math.inf)
    comps = tuple(compose_scalar(comp, cache) for comp in f.components)
    out = PolynomialMap(f.nvars, comps)
    if out.term_count() > caps.max_terms:
        raise ResourceCapError(
            f"composition produced {out.term_count()} terms, cap is {caps.max_terms}",
            cap="max_terms",
        )
    return out


def has_identity_linear_part_poly(f: PolynomialMap) -> bool:
    ident = poly_identity(f.nvars)
    for comp, unit in zip(f.components, ident.components):
        for e, c in comp.items():
            if sum(e) == 1 and c != unit.get(e, 0):
                return False
        for e, c in unit.items():
            if comp.get(e, 0) != c:
                return False
    return True


def from_truncated(f: TruncatedSeriesMap) -> PolynomialMap:
    """Read a truncated map as an exact polynomial (absent terms are zero)."""
    return PolynomialMap(f.ctx.nvars, tuple(dict(c) for c in f.components))


def to_truncated(f: PolynomialMap, degree_cap: int) -> TruncatedSeriesMap:
    """Truncate an exact polynomial map to a working degree."""
    ctx = SeriesContext(f.nvars, degree_cap)
    return series_map(
        ctx,
        [
            {e: c for e, c in comp.items() if sum(e) <= degree_cap}
            for comp in f.components
        ],
    )


@dataclass(frozen=True)
class TailReport:
    """Outcome of one tail-vanishing sweep.

    degrees[m-1] and term_counts[m-1] describe term T_m; a degree of None
    marks an identically zero term.  vanishing_m0 is the least m with
    T_m = 0 exactly, when the sweep found one; every later tested term
    was then verified to be zero as well, and certificate_inverse holds
    the finite inverse x + T_1 + ... + T_{m0-1}, verified by exact
    two-sided composition.
    """

    searched_upto: int
    vanishing_m0: int | None
    degrees: tuple
    term_counts: tuple
    certificate_inverse: PolynomialMap | None

    def records(self):
        """One (m, degree, term_count, zero) record per tested m."""
        return [
            (m, d, t, d is None)
            for m, (d, t) in enumerate(zip(self.degrees, self.term_counts), start=1)
        ]


def tail_vanishing_test(
    f: PolynomialMap, m_max: int, caps: ResourceCaps = DEFAULT_CAPS
) -> TailReport:
    """Compute T_1..T_{m_max} exactly and look for an identically zero tail.

    T_0 = id and T_{m+1} = T_m - T_m o f.  A zero T_{m0} propagates:
    every later term is still computed and checked rather than assumed
    zero, and the certificate inverse is verified by composing it with f
    on both sides, untruncated.  Any violation of those consistency
    claims raises instead of reporting.
    """
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    if not has_identity_linear_part_poly(f):
        raise NonIdentityLinearPartError("linear part is not the identity")
    ident = poly_identity(f.nvars)
    degrees: list = []
    counts: list = []
    vanishing: int | None = None
    t = ident
    for m in range(1, m_max + 1):
        t = poly_sub(t, poly_compose(t, f, caps))
        zero = poly_is_zero(t)
        degrees.append(None if zero else poly_degree(t))
        counts.append(t.term_count())
        if zero and vanishing is None:
            vanishing = m
        if not zero and vanishing is not None:
            raise VerificationError(
                f"term {m} is nonzero although term {vanishing} vanished"
            )
    certificate = None
    if vanishing is not None:
        inv = ident
        t = ident
        for _ in range(1, vanishing):
            t = poly_sub(t, poly_compose(t, f, caps))
            inv = poly_add(inv, t)
        if poly_compose(f, inv, caps) != ident or poly_compose(inv, f, caps) != ident:
            raise VerificationError("certificate inverse failed composition check")
        certificate = inv
    return TailReport(
        searched_upto=m_max,
        vanishing_m0=vanishing,
        degrees=tuple(degrees),
        term_counts=tuple(counts),
        certificate_inverse=certificate,
    )


def poly_jacobian(f: PolynomialMap, cap) -> SeriesGrid:
    """Jacobian of an exact polynomial map, entries truncated at cap.

    Entry (i, j) is d(component j)/dx_i.  Differentiation is applied to
    the full polynomial before truncation, so entries are exact through
    the cap even when f itself has higher-degree terms.
    """
    n = f.nvars
    grid = [[{} for _ in range(n)] for _ in range(n)]
    for j, comp in enumerate(f.components):
        for e, c in comp.items():
            for i, a in enumerate(e):
                if a and sum(e) - 1 <= cap:
                    de = e[:i] + (a - 1,) + e[i + 1 :]
                    cell = grid[i][j]
                    v = cell.get(de)
                    cell[de] = c * a if v is None else v + c * a
    entries = tuple(
        tuple({e: c for e, c in cell.items() if c} for cell in row) for row in grid
    )
    return SeriesGrid(n, cap, entries)


def jacobian_form_check(
    f: PolynomialMap, m: int, degree_cap: int
) -> tuple[bool, SeriesGrid]:
    """Jacobian form of the vanishing condition for term m, within a degree.

    Evaluates J(x) * (m E + sum_{k=2}^m (-1)^(k-1) binom(m, k)
    J(f(x)) J(f^(2)(x)) ... J(f^(k-1)(x))) and compares it with the
    identity grid, all entries truncated at degree_cap.  J is the
    Jacobian with entry (i, j) holding d(component j)/dx_i.  Returns the
    verdict and the residual grid (left side minus identity).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    n = f.nvars
    cap = degree_cap
    t = to_truncated(f, cap)
    J = poly_jacobian(f, cap)
    bracket = grid_scale(grid_identity(n, cap), m)
    running = None
    fk = t
    for k in range(2, m + 1):
        Jk = grid_compose(J, fk, cap)
        running = Jk if running is None else grid_mul(running, Jk, cap)
        sign = -1 if k % 2 == 0 else 1
        bracket = grid_add(bracket, grid_scale(running, sign * math.comb(m, k)))
        if k < m:
            fk = compose(fk, t)
    lhs = grid_mul(J, bracket, cap)
    residual = grid_sub(lhs, grid_identity(n, cap))
    return grid_is_zero(residual), residual


def elementary_automorphism(nvars: int, j: int, g: Mapping) -> PolynomialMap:
    """The map sending x_j to x_j + g(other variables), identity elsewhere.

    j is 1-based.  g must not involve x_j and must have zero constant
    term; its inverse is then the same construction with -g.
    """
    if not 1 <= j <= nvars:
        raise ValueError(f"component index {j} out of range 1..{nvars}")
    zero = (0,) * nvars
    gd: Terms = {}
    for e, c in g.items():
        e = tuple(e)
        if len(e) != nvars or any(k < 0 for k in e):
            raise FormatError(f"bad exponent tuple {e} for {nvars} variables")
        c = Fraction(c)
        if not c:
            continue
        if e == zero:
            raise ConstantTermError("g must have zero constant term")
        if e[j - 1]:
            raise PreconditionError(
                f"g involves variable {j}, which it modifies"
            )
        gd[e] = c
    base = poly_identity(nvars)
    comps = list(base.components)
    comp = dict(comps[j - 1])
    for e, c in gd.items():
        v = comp.get(e)
        nv = c if v is None else v + c
        if nv:
            comp[e] = nv
        elif v is not None:
            del comp[e]
    comps[j - 1] = comp
    return PolynomialMap(nvars, tuple(comps))


@dataclass(frozen=True)
class TameAutomorphism:
    """A composed chain of elementary maps with its exact known inverse."""

    map: PolynomialMap
    inverse: PolynomialMap
    steps: tuple  # (j, g) per elementary factor, outermost last


def random_tame(
    nvars: int,
    steps: int,
    seed: int,
    *,
    max_degree: int = 3,
    coeff_bound: int = 3,
    max_terms_per_step: int = 2,
    caps: ResourceCaps = DEFAULT_CAPS,
) -> TameAutomorphism:
    """Random composition of elementary maps with its known exact inverse.

    Each step modifies one variable by a random polynomial of degree 2
    to max_degree in the other variables, so linear parts stay the
    identity.  The inverse is the reversed chain of negated steps.
    Deterministic for a given seed.
    """
    if nvars < 2:
        raise PreconditionError(
            "elementary steps need at least two variables to stay nontrivial"
        )
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    rng = random.Random(seed)
    others = {j: [i for i in range(nvars) if i != j - 1] for j in range(1, nvars + 1)}
    fwd = poly_identity(nvars)
    inv = poly_identity(nvars)
    made = []
    for _ in range(steps):
        j = rng.randrange(1, nvars + 1)
        g: Terms = {}
        for _ in range(rng.randint(1, max_terms_per_step)):
            d = rng.randint(2, max_degree)
            e = [0] * nvars
            for _ in range(d):
                e[rng.choice(others[j])] += 1
            c = rng.choice([k for k in range(-coeff_bound, coeff_bound + 1) if k])
            e = tuple(e)
            g[e] = g.get(e, Fraction(0)) + c
        g = {e: c for e, c in g.items() if c}
        if not g:
            continue
        step = elementary_automorphism(nvars, j, g)
        step_inv = elementary_automorphism(nvars, j, {e: -c for e, c in g.items()})
        fwd = poly_compose(step, fwd, caps)
        inv = poly_compose(inv, step_inv, caps)
        made.append((j, g))
    return TameAutomorphism(map=fwd, inverse=inv, steps=tuple(made))
