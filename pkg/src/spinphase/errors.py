"""Exception hierarchy."""


class SpinPhaseError(Exception):
    """Base class for all errors raised by :mod:`spinphase`."""


class UnsupportedSpin(SpinPhaseError, ValueError):
    pass


class NotAntisymmetric(SpinPhaseError, ValueError):
    pass


class AlgebraViolation(SpinPhaseError):
    """A bracket identity failed beyond tolerance.  ``report`` holds the residuals."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ZeroLambda(SpinPhaseError, ValueError):
    pass


class InconsistentMomentum(SpinPhaseError, ValueError):
    pass


class DegenerateOperator(SpinPhaseError, ArithmeticError):
    pass


class StepUnstable(SpinPhaseError, ArithmeticError):
    pass


class ConfigError(SpinPhaseError, ValueError):
    pass
