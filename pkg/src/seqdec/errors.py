"""Exception types shared across the library."""


class SeqdecError(Exception):
    """Base class for all library errors."""


class ValidationError(SeqdecError):
    """An input value violates a structural invariant."""


class DomainMismatchError(ValidationError):
    """Two objects that must share a domain do not."""


class CapExceededError(SeqdecError):
    """A configurable resource cap was hit; the computation was refused.

    ``stats`` carries whatever partial counters were available at the
    point of refusal.
    """

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class NoTrivialDecompositionError(SeqdecError):
    """The intermediate domain is too small for the injection construction."""
