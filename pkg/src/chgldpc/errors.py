"""Exception types shared across modules."""


class RefusalError(RuntimeError):
    """An input exceeds a documented budget or violates a precondition."""


class InternalError(RuntimeError):
    """A post-condition check failed; indicates a bug rather than bad input."""
