"""Shared exception types."""


class ValidationError(ValueError):
    """A structure violates one of its invariants.

    The message names the first failing invariant (offending element,
    pair or triple) so that bad input files can be fixed directly.
    """


class BoundError(ValueError):
    """A requested enumeration exceeds the configured search bounds."""
