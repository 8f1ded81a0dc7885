"""Exception hierarchy shared by all modules."""


class ParlpError(Exception):
    """Base class for every error raised by the toolkit."""


class SingularMatrix(ParlpError):
    pass


class DependentColumns(ParlpError):
    pass


class SchemaError(ParlpError, ValueError):
    """Input document does not match the expected JSON layout."""


class DimensionMismatch(ParlpError, ValueError):
    pass


class CapExceeded(ParlpError):
    """Problem is larger than the enumeration cap allows."""


class SingularBasis(ParlpError):
    pass


class NotOptimal(ParlpError):
    """A problem that was required to be Optimal is infeasible or unbounded.

    ``where`` names the offending item (an index or a family parameter N)
    when the problem came from a collection.
    """

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class NotOptimalBasic(NotOptimal):
    """The basic point handed to a ranging routine is not KKT-optimal."""


class InfeasibleProblem(ParlpError):
    pass


class RectangularBasis(ParlpError):
    """Ranging needs a square basis but the constraint matrix is rank deficient."""


class ZeroDelta(ParlpError, ValueError):
    pass


class LinearityViolation(ParlpError):
    def __init__(self, theta, expected, got):
        super().__init__(
            f"value at theta={theta} is {got}, linear prediction was {expected}"
        )
        self.theta = theta
        self.expected = expected
        self.got = got


class ConcavityViolation(ParlpError):
    def __init__(self, index, lhs, rhs):
        super().__init__(f"triple {index}: V(mix) = {lhs} < {rhs}")
        self.index = index
