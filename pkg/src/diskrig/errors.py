"""Exception types shared across the package."""


class DiskrigError(Exception):
    pass


# geometry kernel
class AngleUndefined(DiskrigError):
    pass


class NotTransverse(DiskrigError):
    pass


class DegenerateTriple(DiskrigError):
    pass


# moebius
class MapsToInfinity(DiskrigError):
    pass


class UnboundedImage(DiskrigError):
    pass


class DegenerateInput(DiskrigError):
    pass


class NoAnchorFound(DiskrigError):
    pass


class ConditionFailed(DiskrigError):
    """Normalization post-conditions do not hold for the given epsilon."""

    def __init__(self, epsilon, failures):
        self.epsilon = epsilon
        self.failures = failures
        super().__init__(f"conditions failed at eps={epsilon}: {failures}")


class InsufficientAnchors(DiskrigError):
    pass


# config
class ContainmentViolation(DiskrigError):
    pass


class HypothesesViolated(DiskrigError):
    pass


# boundary / index
class PointOnCurve(DiskrigError):
    pass


class CornerOffBoundary(DiskrigError):
    pass


class DegenerateContact(DiskrigError):
    pass


class CombinatoricsMismatch(DiskrigError):
    pass


class CoincidentCorner(DiskrigError):
    pass


class NearFixedPoint(DiskrigError):
    """Map not certifiably fixed-point-free at the current sampling density."""


class GluingMismatch(DiskrigError):
    pass


class NoNonnegativeRoute(DiskrigError):
    pass


# torus
class AlternationViolated(DiskrigError):
    pass


class BasePointOnBoundary(DiskrigError):
    pass


class PathThroughTorusPoint(DiskrigError):
    pass


class NoZeroIndexMap(DiskrigError):
    pass


# subsumption
class ObservationViolated(DiskrigError):
    pass


# lemma suite
class HypothesisUnmet(DiskrigError):
    pass


# solver
class UnsupportedAngle(DiskrigError):
    pass


class TriangleViolation(DiskrigError):
    def __init__(self, face, msg=""):
        self.face = face
        super().__init__(f"triangle inequality fails on face {face} {msg}")


class Nonconvergence(DiskrigError):
    pass


class InconsistentPlacement(DiskrigError):
    pass


class ExtraneousContact(DiskrigError):
    pass


# cli / io
class ParseError(DiskrigError):
    pass


class SchemaError(DiskrigError):
    pass


class IncidenceMismatch(DiskrigError):
    pass


class IOFailure(DiskrigError):
    pass
