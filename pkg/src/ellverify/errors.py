"""Exception hierarchy shared by all evaluators."""


class EllverifyError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EllverifyError, ValueError):
    """Argument outside the domain of the function (e.g. Im tau <= 0)."""


class ConvergenceError(EllverifyError, ArithmeticError):
    """A series, product or lattice sum did not reach the requested tolerance."""


class PoleError(EllverifyError, ZeroDivisionError):
    """Evaluation requested at (or too close to) a pole."""


class BranchTrackingError(EllverifyError):
    """Logarithm could not be followed continuously along a path."""


class InstabilityError(EllverifyError):
    """Numerical differentiation did not settle under Richardson refinement."""


class BoundarySingularityError(EllverifyError):
    """Contour quadrature failed, usually because a zero or pole sits on the contour."""


class WindingError(EllverifyError):
    """Argument-principle integral is not close enough to an integer."""


class RankDeficiencyError(EllverifyError, ValueError):
    """Least-squares design matrix does not have full column rank."""
