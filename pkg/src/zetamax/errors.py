"""Exception types shared across the package.

Validation failures (bad arguments, out-of-domain points, out-of-regime
parameters) derive from ValueError; resource and precision failures derive
from RuntimeError.  The CLI maps the first group to exit code 2 and
ResourceLimitError to exit code 3.
"""


class OutOfDomainError(ValueError):
    """Evaluation point lies outside the domain a table or method covers."""


class OutOfRegimeError(ValueError):
    """Parameters fall below the regime where the derived formulas are defined."""


class PrincipalCharacterError(ValueError):
    """The principal character was passed where a non-principal one is required."""


class TailNotCertifiedError(RuntimeError):
    """The available table domain cannot certify the truncation tail below tol."""


class ResourceLimitError(RuntimeError):
    """A configured enumeration / memory / grid budget would be exceeded."""


class PrecisionUnreachableError(RuntimeError):
    """The requested tolerance cannot be met by the configured precision."""
