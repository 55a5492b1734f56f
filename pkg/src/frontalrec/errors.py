"""Exceptions shared across the package."""


class FrontalRecError(Exception):
    """Base class for all errors raised by frontalrec."""


class InconclusiveError(FrontalRecError):
    """A decision needed a coefficient beyond the reliable truncation order.

    ``order`` is the jet order that was exhausted (``None`` if not tied to a
    particular degree).
    """

    def __init__(self, reason, order=None):
        super().__init__(reason)
        self.reason = reason
        self.order = order


class NotDivisible(FrontalRecError, ArithmeticError):
    """Raised by :func:`frontalrec.jets.divide` when no formal quotient exists.

    ``degree`` is the first total degree at which the degree-by-degree solve
    became inconsistent.
    """

    def __init__(self, degree):
        super().__init__(f"not divisible: inconsistency at degree {degree}")
        self.degree = degree


class CorankError(FrontalRecError):
    """Operation requires a different corank than the germ has."""

    def __init__(self, corank, expected=1):
        super().__init__(f"germ has corank {corank}, expected {expected}")
        self.corank = corank
        self.expected = expected


class NotFrontalError(FrontalRecError):
    """Recognition refused because the germ is not a proper frontal."""

    def __init__(self, frontal_data):
        super().__init__(f"not a proper frontal: {frontal_data.status.value}")
        self.frontal_data = frontal_data


class PreconditionError(FrontalRecError):
    """Input is outside the domain of the requested operation (e.g. n != 2)."""
