"""Exception hierarchy shared by every evaluator."""


class SpecfunError(Exception):
    """Base class for all library errors."""


class DomainError(SpecfunError, ValueError):
    """An argument lies outside the domain of the requested function."""


class ConvergenceFailure(SpecfunError, ArithmeticError):
    """A series or quadrature did not reach its tolerance within budget."""


class IllConditioned(SpecfunError, ArithmeticError):
    """A finite-part fit is too ill-conditioned to trust."""


class FitRejected(SpecfunError, ArithmeticError):
    """A finite-part fit left a residual larger than the acceptance bound."""
