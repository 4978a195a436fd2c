"""Exception types raised by symsector.

Every error derives from :class:`SymsectorError`, itself a ``ValueError``,
so callers can catch validation failures in one place. The CLI maps these
to exit status 2.
"""


class SymsectorError(ValueError):
    """Base class for all validation and precondition failures."""


class NonSymmetricInput(SymsectorError):
    pass


class NotPSD(SymsectorError):
    pass


class DimensionMismatch(SymsectorError):
    pass


class OddDimension(SymsectorError):
    pass


class NotSymplectic(SymsectorError):
    pass


class BlockSingular(SymsectorError):
    """Block A or D is numerically singular, so the map cannot be monotone."""


class SingularA(SymsectorError):
    pass


class NotMonotone(SymsectorError):
    pass


class NotStrictlyMonotone(NotMonotone):
    pass


class NotInterior(SymsectorError):
    pass


class NotTransversal(SymsectorError):
    pass


class NotLagrangian(SymsectorError):
    pass


class NotInLagC(SymsectorError):
    pass


class ImageNotGraph(SymsectorError):
    pass


class DistanceTooLarge(SymsectorError):
    pass


class NotOrdered(SymsectorError):
    pass


class NotMonotoneElement(NotMonotone):
    """A sequence element fails the monotonicity test.

    The zero-based position of the offending map is kept in ``index``.
    """

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"map at index {index} is not monotone")


class NoContraction(SymsectorError):
    pass


class SpecViolation(SymsectorError):
    pass


class ProbeOnBoundary(SymsectorError):
    pass
