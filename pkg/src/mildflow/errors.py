"""Exception types shared across the package."""


class MildflowError(Exception):
    """Base class for every error raised by mildflow."""


class InvalidBandwidth(MildflowError, ValueError):
    pass


class ShapeError(MildflowError, ValueError):
    pass


class InvalidTime(MildflowError, ValueError):
    pass


class ResolutionError(MildflowError, ValueError):
    pass


class InvalidExponent(MildflowError, ValueError):
    pass


class InvalidRate(MildflowError, ValueError):
    pass


class DomainError(MildflowError, ValueError):
    pass


class PlanError(MildflowError, ValueError):
    """Exponent plan is inconsistent with a formula that consumes it."""


class DegenerateConstants(MildflowError, ValueError):
    pass


class CannotFit(MildflowError, ValueError):
    pass


class TooFewNodes(MildflowError, ValueError):
    pass


class IdenticalData(MildflowError, ValueError):
    pass


class InvalidIndices(MildflowError, ValueError):
    pass


class OracleFailure(MildflowError, RuntimeError):
    pass


class NumericalBlowup(MildflowError, FloatingPointError):
    """A solver state became non-finite or grew past the blowup threshold."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class Diverged(MildflowError, RuntimeError):
    """Picard iteration did not reach tolerance within ``max_iter``."""

    def __init__(self, message, trajectory=None, distances=None):
        super().__init__(message)
        self.trajectory = trajectory
        self.distances = distances or []


class ConfigError(MildflowError, ValueError):
    """Config file could not be parsed (unknown key, bad type, bad syntax)."""


class InvariantViolation(MildflowError, ValueError):
    """Config parsed but breaks a documented invariant."""


class PlanInfeasible(PlanError):
    """No exponent plan satisfies every constraint; ``report`` names the violations."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
