"""Exceptions raised by padicwave. """


class PrimeMismatchError(ValueError):
    """Operands live over different primes."""


class PrecisionError(ArithmeticError):
    """A value vanishes at the working precision where a unit is needed."""


class SingularMatrixError(ZeroDivisionError):
    """Matrix is singular at the working precision."""


class DigitError(ValueError):
    """A digit set violates its invariants, or an expansion step failed."""


class GuardError(ValueError):
    """A desk-scale guard was exceeded.

    Parameters
    ----------
    guard : str
        name of the constant in padicwave.constants that was exceeded
    message : str

    """

    def __init__(self, guard, message):
        super().__init__("{}: {}".format(guard, message))
        self.guard = guard
