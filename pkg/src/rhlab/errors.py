"""Exception types shared across the toolkit."""


class RhlabError(Exception):
    """Base class for all toolkit errors."""


class OverlappingArcs(RhlabError):
    pass


class DegenerateArc(RhlabError):
    pass


class PointOnContour(RhlabError):
    pass


class UnsupportedBasis(RhlabError):
    pass


class GridTooCoarse(RhlabError):
    pass


class SingularJump(RhlabError):
    pass


class NearSingularSystem(RhlabError):
    pass


class ResidualAboveTolerance(RhlabError):
    """Raised when a solve misses its residual target; the solution is attached."""

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class NonzeroWinding(RhlabError):
    def __init__(self, winding):
        super().__init__(f"jump has nonzero winding number {winding}")
        self.winding = winding


class WindowExceeded(RhlabError):
    pass


class BlowupDetected(RhlabError):
    pass


class QOutOfRange(RhlabError):
    pass


class ReflectionTooLarge(RhlabError):
    pass


class SymmetryViolation(RhlabError):
    pass


class StepRejected(RhlabError):
    pass


class IllConditioned(RhlabError):
    pass


class DegreeOutOfRange(RhlabError):
    pass


class FitResidualTooLarge(RhlabError):
    pass


class Mismatch(RhlabError):
    pass


class DiagonalUndefined(RhlabError):
    pass


class NotPositive(RhlabError):
    pass


class SymbolNotAnalytic(RhlabError):
    pass
