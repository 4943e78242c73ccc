"""Exception hierarchy.

Everything that signals a numerically meaningless request derives from
:class:`NumericFailure`; the CLI maps those to exit code 3.
"""


class PolcatError(Exception):
    pass


class NumericFailure(PolcatError, ArithmeticError):
    pass


class DegenerateState(NumericFailure):
    """Raised when a superposition has (numerically) zero norm."""


class CutoffTooSmall(NumericFailure):
    """Raised when a Fock-space vector leaks weight into its top levels."""


class StepTooLarge(NumericFailure):
    pass


class NonPhysical(NumericFailure):
    pass


class NotStationary(NumericFailure):
    pass


class UnsupportedBasisCombination(PolcatError, ValueError):
    pass
