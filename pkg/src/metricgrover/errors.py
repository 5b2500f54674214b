"""Exception hierarchy shared by every module."""


class MetricGroverError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(MetricGroverError, ValueError):
    pass


class DimensionMismatch(MetricGroverError, ValueError):
    pass


class OracleSizeExceeded(MetricGroverError, ValueError):
    """A dense oracle was requested above the desk-scale dimension cap."""


class InvalidProblem(MetricGroverError, ValueError):
    pass


class IndexOutOfRange(MetricGroverError, IndexError):
    pass


class MetricDegenerate(MetricGroverError, ValueError):
    """cos(theta) <= 0, i.e. M >= N/2, so g00 is undefined."""


class PhiOutOfRange(MetricGroverError, ValueError):
    pass


class BranchImpossible(MetricGroverError, ArithmeticError):
    """The post-selected branch has (numerically) zero probability."""


class TargetUnreachable(MetricGroverError, ValueError):
    pass
