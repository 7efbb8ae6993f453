"""Exception types shared across the package."""


class AuternaryError(Exception):
    """Base class for all package-specific errors."""


class NonClassicForm(AuternaryError):
    """An odd cross coefficient makes the Gram matrix half-integral."""


class OutOfScope(AuternaryError):
    """The shift vector has conductor 1, or conductor larger than 2."""


class AssumptionViolated(AuternaryError):
    """The coset fails one of the integrality or ideal assumptions."""


class NotPositiveDefinite(AuternaryError):
    """The quadratic part is not positive definite."""


class FactorizationLimit(AuternaryError):
    """Factoring exceeded the configured effort cap."""


class EnumerationBudgetExceeded(AuternaryError):
    """Lattice-point enumeration exceeded the configured vector budget."""


class PreconditionViolated(AuternaryError):
    """An operation was invoked outside its documented precondition."""


class GiveUp(AuternaryError):
    """Rejection sampling failed to produce enough instances."""


class ParseError(AuternaryError):
    """An instance file is malformed; the message names the line."""
