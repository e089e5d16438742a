"""Exception hierarchy shared by all modules."""


class QBMError(Exception):
    """Base class for every error raised by qbmtemp."""


class DomainError(QBMError, ValueError):
    pass


class PoleError(DomainError):
    """Argument sits on a pole of Gamma (0, -1, -2, ...)."""


class InvalidParams(QBMError, ValueError):
    pass


class SolverError(QBMError, RuntimeError):
    """Base class for root-finding failures."""


class NoBracket(SolverError):
    pass


class MaxIterations(SolverError):
    pass


class SpaInvalid(SolverError):
    """The saddle has vanishing (or wrong-sign) curvature."""


class EmptyInput(QBMError, ValueError):
    pass


class NumericalFailure(QBMError, RuntimeError):
    pass
