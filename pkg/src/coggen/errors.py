"""Exception hierarchy shared by every coggen module."""


class CogGenError(Exception):
    """Base class for all library errors."""


class ConfigError(CogGenError, ValueError):
    """Invalid configuration or bad call arguments."""


class NumericalError(CogGenError, ArithmeticError):
    """A computation produced or received non-finite / degenerate values."""


# core-math
class NonPowerOfTwo(ConfigError):
    pass


class NonFinite(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


# forward-model
class BudgetInfeasible(ConfigError):
    pass


class BadDims(ConfigError):
    pass


class ShapeMismatch(ConfigError):
    pass


# generator
class BadConfig(ConfigError):
    pass


class DegenerateDenominator(NumericalError):
    pass


# scheduler
class AllZeroMeasurements(NumericalError):
    pass


class BadW(ConfigError):
    pass


class LengthMismatch(ConfigError):
    pass


class FinalStage(CogGenError):
    pass


# optimizer
class NonFiniteLoss(NumericalError):
    """Raised when a run diverges; ``partial`` carries the result so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


# metrics
class ZeroReference(NumericalError):
    pass


# theory-lab
class StepSizeTooLarge(ConfigError):
    pass


class DimMismatch(ConfigError):
    pass


class BoundViolated(NumericalError):
    pass


class BadInputs(ConfigError):
    pass


class NonExpansivenessViolated(NumericalError):
    pass


# io
class FormatError(CogGenError, IOError):
    pass


class BadMagic(FormatError):
    pass


class TruncatedFile(FormatError):
    pass


class UnsupportedVersion(FormatError):
    pass
