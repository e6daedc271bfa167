"""Exception hierarchy shared by the qhamilton modules."""


class QHamiltonError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(QHamiltonError, ValueError):
    pass


class InvalidDimension(QHamiltonError, ValueError):
    pass


class NonOrthogonal(QHamiltonError, ValueError):
    pass


class OrientationReversing(QHamiltonError, ValueError):
    pass


class TripleInconsistent(QHamiltonError, ArithmeticError):
    pass


class NotUnitImaginary(QHamiltonError, ValueError):
    pass


class OddDegreeBase(QHamiltonError, ValueError):
    pass


class DegreeZero(QHamiltonError, ValueError):
    pass


class DegreeMismatch(QHamiltonError, ValueError):
    pass


class NotImaginary(QHamiltonError, ValueError):
    pass


class NonFiniteState(QHamiltonError, ArithmeticError):
    """Integration produced a NaN or infinite state.

    The states integrated before the failure are kept on ``trajectory``
    so callers can still persist them.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory
