"""Exception hierarchy shared by every module of the package."""


class IdemError(Exception):
    """Base class for all errors raised by idemdecomp."""


class FieldMismatchError(IdemError, ValueError):
    """Operands live over different coefficient fields."""


class ShapeError(IdemError, ValueError):
    """Matrix dimensions are incompatible with the requested operation."""


class NotInvertibleError(IdemError, ZeroDivisionError):
    """Division by zero or inversion of a singular matrix."""


class PreconditionError(IdemError, ValueError):
    """An input violates the documented precondition of an operation."""


class FactorizationCapError(PreconditionError):
    """Polynomial degree exceeds the supported factorization cap."""


class NotCoprimeError(PreconditionError):
    """Two polynomials (or characteristic polynomials) share a common factor."""

    def __init__(self, message, common=None):
        super().__init__(message)
        self.common = common


class BudgetError(PreconditionError):
    """An exhaustive search would exceed its enumeration budget."""


class VerificationError(IdemError, AssertionError):
    """An internal certificate or idempotency check failed.

    This always indicates a bug; ``payload`` carries whatever diagnostic data
    was available when the check failed.
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}
