"""Exact-arithmetic kernel for composing and inverting multivariate
formal power series maps with zero constant term.

The pieces, bottom up: multi-index combinatorics (multiindex), exact
rational scalars (coefficients), truncated series maps and composition
(series), the symmetric-product block calculus that mirrors composition
in matrix form (gradedmatrix), three cross-checking inversion algorithms
(inversion), exact polynomial automorphism experiments (autolab), text
file formats (fileformat), and an HTTP service plus CLI on top (service,
cli).
"""

__version__ = "0.1.0"

from .errors import (
    ConstantTermError,
    ContextMismatchError,
    DegreeOverflowError,
    DuplicateTermError,
    FormatError,
    KernelError,
    NonIdentityLinearPartError,
    PreconditionError,
    ResourceCapError,
    SingularLinearPartError,
    VerificationError,
)
from .multiindex import SeriesContext
from .series import (
    TruncatedSeriesMap,
    compose,
    identity_map,
    iterate,
    order,
    series_map,
    zero_map,
)
from .inversion import (
    invert,
    invert_fixpoint,
    invert_general,
    invert_neumann,
    invert_recurrence,
)
from .gradedmatrix import compose_via_matrix, from_series, sym_exp, to_series
from .autolab import (
    PolynomialMap,
    elementary_automorphism,
    jacobian_form_check,
    polynomial_map,
    random_tame,
    tail_vanishing_test,
)
from .fileformat import emit_series, parse_series

__all__ = [
    "ConstantTermError",
    "ContextMismatchError",
    "DegreeOverflowError",
    "DuplicateTermError",
    "FormatError",
    "KernelError",
    "NonIdentityLinearPartError",
    "PolynomialMap",
    "PreconditionError",
    "ResourceCapError",
    "SeriesContext",
    "SingularLinearPartError",
    "TruncatedSeriesMap",
    "VerificationError",
    "compose",
    "compose_via_matrix",
    "elementary_automorphism",
    "emit_series",
    "from_series",
    "identity_map",
    "invert",
    "invert_fixpoint",
    "invert_general",
    "invert_neumann",
    "invert_recurrence",
    "iterate",
    "jacobian_form_check",
    "order",
    "parse_series",
    "polynomial_map",
    "random_tame",
    "series_map",
    "sym_exp",
    "tail_vanishing_test",
    "to_series",
    "zero_map",
]
