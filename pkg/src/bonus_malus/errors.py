"""Exception hierarchy.  Config errors map to CLI exit 1, numerical ones to exit 2."""


class BonusMalusError(Exception):
    pass


class ConfigError(BonusMalusError, ValueError):
    """Invalid portfolio, rule or scenario configuration."""


class NumericalError(BonusMalusError):
    pass


class StationarySolveError(NumericalError):
    """Stationary vector could not be resolved to the required residual."""

    def __init__(self, message, residual=None, location=None):
        super().__init__(message)
        self.residual = residual
        self.location = location


class UnreachableLevelError(NumericalError):
    """A BM level carries zero stationary mass, so its relativity is undefined."""

    def __init__(self, message, level=None, risk_class=None):
        super().__init__(message)
        self.level = level
        self.risk_class = risk_class


class ConvergenceError(NumericalError):
    """Coordinate descent hit its cycle cap; ``trace`` holds the iterates so far."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
