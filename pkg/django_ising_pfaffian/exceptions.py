"""
Exception hierarchy for the Pfaffian solver.

Management commands map these to exit codes and the JSON views map them to
HTTP status codes, see ``EXIT_CODES`` and ``HTTP_STATUS``.
"""


class IsingPfaffianError(Exception):
    """Base class for every error raised by the solver."""


class InputError(IsingPfaffianError, ValueError):
    """The caller supplied something malformed (file, weights, arguments)."""


class GraphFileError(InputError):
    """A graph file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructuralError(InputError):
    """A combinatorial precondition failed (rotation, tree, parity, matching)."""


class DomainError(InputError):
    """A value lies outside the domain of an operation (e.g. x_e = 0)."""


class CapacityError(IsingPfaffianError):
    """An exhaustive enumeration would exceed the configured cap."""

    def __init__(self, message, required=None, cap=None):
        self.required = required
        self.cap = cap
        super().__init__(message)


class InvariantViolation(IsingPfaffianError, AssertionError):
    """An internal invariant failed; this always indicates a bug upstream."""


class VerificationFailure(IsingPfaffianError):
    """The formula disagreed with an oracle."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


EXIT_CODES = {
    VerificationFailure: 1,
    InputError: 2,
    CapacityError: 3,
}

HTTP_STATUS = {
    InputError: 400,
    CapacityError: 413,
    VerificationFailure: 422,
    InvariantViolation: 500,
}


def _lookup(table, exc, default):
    for cls in type(exc).__mro__:
        if cls in table:
            return table[cls]
    return default


def exit_code_for(exc):
    return _lookup(EXIT_CODES, exc, 1)


def http_status_for(exc):
    return _lookup(HTTP_STATUS, exc, 500)
