"""Exception hierarchy shared by all modules."""


class QSolvableError(Exception):
    """Base class for every error raised by this package."""


class InvalidEncoding(QSolvableError, ValueError):
    pass


class BadSpec(QSolvableError, ValueError):
    pass


class SizeLimitExceeded(QSolvableError):
    pass


class NotSolvable(QSolvableError):
    pass


class EmptySet(QSolvableError, ValueError):
    pass


class DomainMismatch(QSolvableError, ValueError):
    pass


class LayoutMismatch(QSolvableError, ValueError):
    pass


class FactorizationError(QSolvableError):
    """A joint state that should be a product state is entangled."""


class InsufficientCopies(QSolvableError):
    pass


class Unverified(QSolvableError):
    """A probabilistic answer failed its classical cross-check."""


class NoCoprimeOutcome(QSolvableError):
    """No measured ancilla value was a unit modulo r."""


class BudgetExhausted(QSolvableError):
    pass


class NotNormal(QSolvableError):
    pass


class NotAbelianQuotient(QSolvableError):
    pass


class NotSubgroup(QSolvableError):
    pass
