"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: domain/configuration problems exit 2,
resource exhaustion exits 3, and internal invariant violations exit 4.
"""


class CFDimError(Exception):
    """Base class for all package errors."""


class DomainError(CFDimError):
    """Input lies outside an operation's mathematical domain."""


class ConfigurationError(CFDimError):
    """Required configuration (exponent tables, horizons, schedules) is missing."""


class ResourceError(CFDimError):
    """An enumeration or solve exceeded its stated budget."""


class InvariantViolation(CFDimError):
    """A condition the underlying theory guarantees was observed to fail."""


class InfeasibleSelection(InvariantViolation):
    """Greedy quotient selection found its target outside the feasible interval.

    ``side`` records which bound was violated ("below_lower" or "at_or_above_upper").
    """

    def __init__(self, message: str, side: str):
        super().__init__(message)
        self.side = side
