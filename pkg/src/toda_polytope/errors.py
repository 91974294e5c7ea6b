"""Exception hierarchy shared by all modules."""


class TodaPolytopeError(Exception):
    """Base class for every error raised by the package."""


class SingularInput(TodaPolytopeError):
    pass


class NotSymmetric(TodaPolytopeError):
    pass


class DegenerateSpectrum(TodaPolytopeError):
    pass


class DimensionMismatch(TodaPolytopeError):
    pass


class NumericalBreakdown(TodaPolytopeError):
    pass


class RankDeficiency(TodaPolytopeError):
    pass


class EmptyOrFullSet(TodaPolytopeError):
    pass


class TooLarge(TodaPolytopeError):
    pass


class NotPositiveVector(TodaPolytopeError):
    pass


class NotInterior(TodaPolytopeError):
    pass


class NoConvergence(TodaPolytopeError):
    """Newton iteration stopped without meeting the tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
