"""Exception hierarchy.

Every error raised by the library derives from MahlerError and carries the
process exit code the CLI maps it to: 2 for rejected input, 1 for a
computation that could not be completed or certified.
"""


class MahlerError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1

    def to_dict(self) -> dict:
        """Machine-readable error object for reports."""
        return {
            "error": type(self).__name__,
            "message": str(self),
            "exit_code": self.exit_code,
        }


class InvalidInputError(MahlerError, ValueError):
    """The caller supplied arguments outside the operation's domain."""

    exit_code = 2


class ComputationError(MahlerError, ArithmeticError):
    """The computation ran but could not produce a certified answer."""

    exit_code = 1


# --- invalid input (exit 2) -------------------------------------------------


class FieldMismatch(InvalidInputError):
    """Exact values from two different quadratic fields were combined."""


class DivByZero(InvalidInputError, ZeroDivisionError):
    """Exact division by zero."""


class InvalidOrder(InvalidInputError):
    """Root of unity of order < 1 requested."""


class InvalidPrecision(InvalidInputError):
    """Working/guard bit combination violates P >= 64 and g < P/2."""


class InvalidParameters(InvalidInputError):
    """A parameter tuple violates its structural invariants."""


class OutOfDomain(InvalidInputError):
    """Integer argument below the operation's lower bound."""


class PeriodMismatch(InvalidInputError):
    """A sequence period does not divide the requested transform length."""


class ExactnessRequired(InvalidInputError):
    """An exact-only routine received a numeric literal."""


class DomainError(InvalidInputError):
    """Series argument outside the open unit disk."""


class UnknownCase(InvalidInputError):
    """Case identifier outside the known table."""


class InvalidHypotheses(InvalidInputError):
    """Classifier preconditions are not met."""


class NotApplicable(InvalidInputError):
    """An identity's preconditions do not hold for the given parameters."""


class TooManyMonomials(InvalidInputError):
    """Monomial basis for an independence check exceeds the size guard."""


# --- computational failure (exit 1) -----------------------------------------


class PoleCollision(ComputationError):
    """A series denominator is indistinguishable from zero."""

    def __init__(self, h: int, message: str | None = None) -> None:
        self.h = h
        super().__init__(message or f"denominator of term h={h} is below resolution")

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["h"] = self.h
        return data


class PrecisionTooLow(ComputationError):
    """Working precision cannot support the requested certificate."""


class EmptySeries(ComputationError):
    """Every term of a primed sum was skipped."""


class DegenerateBasis(ComputationError):
    """Lattice basis rows are linearly dependent."""


class Ambiguous(ComputationError):
    """A magnitude-based decision cannot be made (|q| = 1)."""


class IndeterminateDivision(ComputationError, ZeroDivisionError):
    """Division by an error ball that contains zero."""
