"""Exception hierarchy shared by every weldtherm module."""


class WeldThermError(Exception):
    """Base class for all errors raised by weldtherm."""


class DomainError(WeldThermError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class ParameterError(WeldThermError, ValueError):
    """A parameter set violates one of its invariants."""


class SingularPivotError(WeldThermError, ArithmeticError):
    """A zero pivot was met while solving a linear system."""


class BracketError(WeldThermError, ValueError):
    """A root bracket does not straddle a sign change."""


class ConvergenceError(WeldThermError, RuntimeError):
    """An iteration hit its cap before meeting its tolerance."""


class NonFiniteError(WeldThermError, FloatingPointError):
    """A computed state became NaN or infinite."""


class ModelBreakdownError(WeldThermError, RuntimeError):
    """The physical model left its range of validity (e.g. V undefined, melting exceeded)."""


class ConfigError(WeldThermError, ValueError):
    """A configuration document could not be parsed or validated."""


class SchemeError(WeldThermError, RuntimeError):
    """A discrete-scheme guard failed (cell Peclet number or range bound)."""
