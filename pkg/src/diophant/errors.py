"""Exception types raised across the package."""


class DiophantError(Exception):
    """Base class for all package errors."""


class BadInput(DiophantError, ValueError):
    pass


class ZeroPolynomial(DiophantError, ValueError):
    pass


class ZeroVector(DiophantError, ValueError):
    pass


class DegenerateBasis(DiophantError, ValueError):
    pass


class PointOnDivisor(DiophantError, ValueError):
    pass


class PointInSupport(DiophantError, ValueError):
    pass


class EmptyCycle(DiophantError, ValueError):
    pass


class UnsupportedField(DiophantError, ValueError):
    pass


class NoExactCoords(DiophantError, ValueError):
    pass


class NotGeneralPosition(DiophantError, ValueError):
    pass


class DeskScaleExceeded(DiophantError, ValueError):
    pass


class DegenerateEliminant(DiophantError, ValueError):
    pass


class PoleAtPoint(DiophantError, ValueError):
    pass


class SingularPoint(DiophantError, ValueError):
    pass


class PointOffVariety(DiophantError, ValueError):
    pass


class CommonComponent(DiophantError, ValueError):
    pass


class NonIsolatedPoint(DiophantError, ValueError):
    pass


class RestrictionZero(DiophantError, ValueError):
    pass


class ImproperIntersection(DiophantError, ValueError):
    pass


class UnverifiedVanishing(DiophantError, ValueError):
    pass


class SearchExhausted(DiophantError, RuntimeError):
    pass


class MeetsCenter(DiophantError, ValueError):
    pass


class NoCandidate(DiophantError, RuntimeError):
    pass


class PrecisionInsufficient(DiophantError, ValueError):
    pass


class TooFewSamples(DiophantError, ValueError):
    pass


class NonPositive(DiophantError, ValueError):
    pass


class NoWindow(DiophantError, RuntimeError):
    pass
