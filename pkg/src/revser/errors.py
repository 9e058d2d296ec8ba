"""Error taxonomy shared by the kernel, the HTTP service, and the CLI.

Every kernel failure is a ``KernelError`` carrying a stable ``code`` string.
The service maps codes to HTTP responses and the CLI maps them to exit
codes, so the hierarchy here is the single source of truth for failure
classification.
"""

from __future__ import annotations


class KernelError(Exception):
    """Base class for all structured kernel failures."""

    code = "KERNEL_ERROR"


class FormatError(KernelError):
    """Malformed input text or payload (bad syntax, bad scalar, bad shape)."""

    code = "FORMAT_ERROR"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateTermError(FormatError):
    """The same (component, exponent) pair was given twice."""

    code = "DUPLICATE_TERM"


class DegreeOverflowError(FormatError):
    """A term exceeds the declared truncation degree."""

    code = "DEGREE_OVERFLOW"


class PreconditionError(KernelError):
    """Input is well formed but violates a mathematical precondition."""

    code = "PRECONDITION"


class ConstantTermError(PreconditionError):
    """A map carries a nonzero constant term, which the kernel excludes."""

    code = "CONSTANT_TERM"


class ContextMismatchError(PreconditionError):
    """Operands disagree on variable count or truncation degree."""

    code = "CONTEXT_MISMATCH"


class NonIdentityLinearPartError(PreconditionError):
    """The linear part is not the identity, so the unit-tangent algorithms
    do not apply directly."""

    code = "NON_IDENTITY_LINEAR_PART"

    def __init__(self, message: str, linear_part=None):
        self.linear_part = linear_part
        super().__init__(message)


class SingularLinearPartError(PreconditionError):
    """The linear part is not invertible, so no compositional inverse exists."""

    code = "SINGULAR_LINEAR_PART"


class VerificationError(KernelError):
    """Independently computed results disagree, or a claimed identity fails."""

    code = "VERIFICATION_MISMATCH"


class ResourceCapError(KernelError):
    """An exact computation outgrew a configured resource cap."""

    code = "RESOURCE_CAP"

    def __init__(self, message: str, cap: str | None = None):
        self.cap = cap
        super().__init__(message)
