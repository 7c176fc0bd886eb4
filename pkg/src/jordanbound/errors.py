"""Exception hierarchy.

Two families matter to callers: :class:`InputError` (bad input or usage,
CLI exit code 1) and :class:`VerificationError` (a property the theory
guarantees did not hold numerically, CLI exit code 2).
"""


class JordanError(Exception):
    """Base class for every error raised by this package."""


class InputError(JordanError):
    pass


class VerificationError(JordanError):
    pass


# linear algebra

class DimensionMismatchError(InputError, ValueError):
    pass


class NonFiniteEntryError(InputError, ValueError):
    pass


class SingularMatrixError(JordanError, ArithmeticError):
    pass


class NotPositiveDefiniteError(JordanError, ArithmeticError):
    pass


class ConvergenceError(JordanError, ArithmeticError):
    pass


# group enumeration

class OrderCapExceededError(InputError):
    """The closure did not terminate within ``max_order`` elements."""


class SingularGeneratorError(InputError):
    pass


class NotFiniteGroupError(VerificationError):
    """A generator fails a necessary condition for having finite order."""


class GroupTooLargeError(InputError):
    pass


# invariant norms / pipeline

class IllConditionedError(InputError):
    pass


class TheoremViolation(VerificationError):
    """A guaranteed property failed; always a numerical breakdown, never a counterexample."""

    def __init__(self, message, pair=None, residual=None):
        super().__init__(message)
        self.pair = pair
        self.residual = residual


class AbelianCheckFailed(TheoremViolation):
    pass


class NormalCheckFailed(TheoremViolation):
    pass


class SampleSizeError(InputError):
    pass


# catalog / cli

class UnknownCatalogEntry(InputError):
    pass


class InvalidParameters(InputError):
    pass


class SpecParseError(InputError):
    pass
