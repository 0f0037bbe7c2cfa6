"""
Custom exceptions for cover-arithmetic.
"""


class CoverArithmeticError(Exception):
    """
    The super class of all cover-arithmetic errors.
    """


class InputError(CoverArithmeticError):
    """
    Super class for errors in the shape of the input rather than its mathematics.
    """


class MalformedInputError(InputError):
    """
    An error thrown when a request does not conform to its schema.
    """


class BudgetError(CoverArithmeticError):
    """
    Super class for errors thrown when a configured budget would be exceeded.
    """


class FactorizationBudgetExceededError(BudgetError):
    """
    An error thrown when a rational is too large to factor under the budget.
    """


class BoundExceededError(BudgetError):
    """
    An error thrown when a cyclotomic conductor exceeds the configured bound.
    """


class BudgetExceededError(BudgetError):
    """
    An error thrown when a denominator or orbit budget would be exceeded.
    """


class ArithmeticDomainError(CoverArithmeticError):
    """
    Super class for arithmetic on values outside an operation's domain.
    """


class ZeroInputError(ArithmeticDomainError):
    """Raised when zero is given where a nonzero rational is required."""


class DivisionByZeroError(ArithmeticDomainError):
    """Raised when inverting the zero element of a cyclotomic field."""


class ConductorMismatchError(ArithmeticDomainError):
    """Raised when cyclotomic elements of different conductors are combined."""


class NotAMultipleError(ArithmeticDomainError):
    """Raised when embedding into a conductor that is not a multiple."""


class SupportMismatchError(ArithmeticDomainError):
    """Raised when a vector and a lattice are declared over different supports."""


class NotASubgroupError(ArithmeticDomainError):
    """Raised when a group index is requested for a non-contained subgroup."""


class NotSquarefreeError(ArithmeticDomainError):
    """Raised when a squarefree integer is required."""


class NotPrimeError(ArithmeticDomainError):
    """Raised when a prime is required."""


class TranscendentalAdditionError(ArithmeticDomainError):
    """Raised when an additive relation involves formal transcendentals."""


class UnsupportedValueShapeError(ArithmeticDomainError):
    """Raised when a value is not a monomial in roots, radicals and symbols."""


class PreconditionError(CoverArithmeticError):
    """
    Super class for violated mathematical preconditions.
    """


class NotSimpleError(PreconditionError):
    """Raised when a simple element is required."""


class NotIndependentError(PreconditionError):
    """Raised when a multiplicatively independent tuple is required."""


class NotSimpleInContextError(PreconditionError):
    """Raised when a tuple is not simple in the ambient cyclotomic field."""


class ConductorIncompatibleError(PreconditionError):
    """Raised when the ambient field lacks the required roots of unity."""


class ShapeMismatchError(PreconditionError):
    """Raised when two root tuples do not name roots of the same bases."""


class NotACompatibleRootError(PreconditionError):
    """Raised when a finer root choice does not power down to the coarser one."""


class ConstructionError(CoverArithmeticError):
    """
    Super class for failures of the isomorphism and congruence constructions.
    """


class NoConjugateChoiceError(ConstructionError):
    """Raised when no image root keeps a partial isomorphism a field isomorphism."""


class SignatureMismatchError(ConstructionError):
    """Raised when two cover presentations cannot correspond generator-wise."""


class InconsistentError(ConstructionError):
    """Raised when a congruence system or a pair of root systems is inconsistent."""
