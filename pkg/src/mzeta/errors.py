"""Exception hierarchy shared by every module of the package."""


class MZetaError(Exception):
    """Base class for all errors raised by mzeta."""


class PoleError(MZetaError, ZeroDivisionError):
    """The argument sits (within tolerance) on a pole of the function."""


class DomainError(MZetaError, ValueError):
    pass


class CapExceeded(MZetaError, ValueError):
    """A configured size cap (Bernoulli index, modulus, ...) was exceeded."""


class OutOfRegion(MZetaError, ValueError):
    """Direct summation was requested outside the absolute-convergence region."""


class BudgetExceeded(MZetaError, RuntimeError):
    pass


class DepthExceeded(MZetaError, RuntimeError):
    pass


class NoValidContour(MZetaError, ValueError):
    pass


class QuadratureDiverged(MZetaError, RuntimeError):
    pass


class TransversalNotFound(MZetaError, RuntimeError):
    pass


class SingularPoint(MZetaError, ValueError):
    """The point lies on a possible-singularity hyperplane.

    ``planes`` holds the offending :class:`~mzeta.singularity.Hyperplane`
    objects so callers can report them.
    """

    def __init__(self, message, planes=()):
        super().__init__(message)
        self.planes = list(planes)
