"""Exception types shared across the package."""


class KnotFactorError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(KnotFactorError, ValueError):
    """Malformed input: gluing tables, diagram codes, serialized records."""


class ContractError(KnotFactorError):
    """An operation was called on an input violating its precondition."""


class ResourceError(KnotFactorError):
    """A configured resource cap (disc count, enumeration size) was exceeded."""


class InternalError(KnotFactorError):
    """A consistency check failed; this always indicates a bug upstream."""


class BudgetExceeded(KnotFactorError):
    """A step budget ran out before a computation completed."""
