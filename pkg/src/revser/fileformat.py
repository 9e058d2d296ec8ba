"""Plain-text series files and the matrix dump format.

A series file is a header plus one line per nonzero term:

    # optional comments, from '#' to end of line
    vars 2
    degree 4
    comp 1: 1 0 -> 1
    comp 1: 0 2 -> 1
    comp 2: 0 1 -> 1

which reads as the map (x + y^2, y).  Unlisted coefficients are zero.
Emission is canonical: components in order, exponents in the graded
enumeration order, coefficients in lowest terms, so emit(parse(t))
normalizes t and round trips thereafter.
"""

from __future__ import annotations

import re

from .coefficients import format_scalar, parse_scalar
from .errors import DegreeOverflowError, DuplicateTermError, FormatError
from .gradedmatrix import BlockMatrix, dump_entries
from .multiindex import SeriesContext
from .series import TruncatedSeriesMap, series_map, terms_in_order

_TERM_RE = re.compile(r"^comp\s+(\d+)\s*:\s*(.*?)\s*->\s*(\S+)$")


def _meaningful_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _header_int(line: str, lineno: int, key: str) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != key or not parts[1].isdigit():
        raise FormatError(f"expected '{key} <positive integer>', got {line!r}", lineno)
    value = int(parts[1])
    if value < 1:
        raise FormatError(f"{key} must be >= 1, got {value}", lineno)
    return value


def parse_series(text: str) -> TruncatedSeriesMap:
    """Parse a series file; errors carry 1-based line numbers."""
    lines = _meaningful_lines(text)
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise FormatError("empty input, expected 'vars N' header") from None
    nvars = _header_int(line, lineno, "vars")
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise FormatError("missing 'degree D' header") from None
    degree = _header_int(line, lineno, "degree")

    comps: list = [dict() for _ in range(nvars)]
    for lineno, line in lines:
        m = _TERM_RE.match(line)
        if m is None:
            raise FormatError(f"expected 'comp j: a_1 .. a_n -> c', got {line!r}", lineno)
        j = int(m.group(1))
        if not 1 <= j <= nvars:
            raise FormatError(f"component {j} out of range 1..{nvars}", lineno)
        fields = m.group(2).split()
        if len(fields) != nvars or not all(f.isdigit() for f in fields):
            raise FormatError(
                f"expected {nvars} nonnegative exponents, got {m.group(2)!r}", lineno
            )
        alpha = tuple(int(f) for f in fields)
        w = sum(alpha)
        if w == 0:
            raise FormatError("constant term forbidden", lineno)
        if w > degree:
            raise DegreeOverflowError(
                f"term of degree {w} exceeds declared degree {degree}", lineno
            )
        try:
            c = parse_scalar(m.group(3))
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        if alpha in comps[j - 1]:
            raise DuplicateTermError(
                f"duplicate term for component {j}, exponent {' '.join(fields)}", lineno
            )
        comps[j - 1][alpha] = c
    return series_map(SeriesContext(nvars, degree), comps)


def emit_series(f: TruncatedSeriesMap, *, comment: str | None = None) -> str:
    """Canonical text form of a map; deterministic byte-for-byte."""
    out = []
    if comment:
        for line in comment.splitlines():
            out.append(f"# {line}" if line else "#")
    out.append(f"vars {f.ctx.nvars}")
    out.append(f"degree {f.ctx.degree_cap}")
    for j, alpha, c in terms_in_order(f):
        exps = " ".join(str(a) for a in alpha)
        out.append(f"comp {j}: {exps} -> {format_scalar(c)}")
    return "\n".join(out) + "\n"


def emit_matrix(M: BlockMatrix) -> str:
    """Matrix dump: one line per nonzero entry,
    "p' p | alpha' | alpha | value", in canonical block and entry order."""
    out = []
    for rw, cw, alpha_r, alpha_c, v in dump_entries(M):
        ar = " ".join(str(a) for a in alpha_r)
        ac = " ".join(str(a) for a in alpha_c)
        out.append(f"{rw} {cw} | {ar} | {ac} | {format_scalar(v)}")
    return "\n".join(out) + ("\n" if out else "")
