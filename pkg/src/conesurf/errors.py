"""Exception hierarchy shared by every conesurf module."""


class ConesurfError(Exception):
    """Base class for all library errors."""


# geometry kernel
class NoFixedPoint(ConesurfError):
    pass


class DegenerateSegment(ConesurfError):
    pass


class LengthMismatch(ConesurfError):
    pass


# surface model
class ParseError(ConesurfError):
    """Input is not well-formed JSON or does not follow the file schema."""


class ValidationError(ConesurfError):
    """A data-model invariant failed.

    ``reason`` is a short machine-readable code such as ``"LengthMismatch"``
    or ``"OpenSurface"``; the message names the offending triangles/edges.
    """

    def __init__(self, reason, message):
        super().__init__(f"{reason}: {message}")
        self.reason = reason


class NonOrientableOrInvalid(ConesurfError):
    pass


class InvalidEdge(ConesurfError):
    pass


class UnmappedStep(ConesurfError):
    pass


# development
class UngluedEdge(ConesurfError):
    pass


class BrokenChain(ConesurfError):
    pass


class BaseMismatch(ConesurfError):
    pass


class NotIncident(ConesurfError):
    pass


# cohomology
class UnknownGenerator(ConesurfError):
    pass


class InconsistentCharacter(ConesurfError):
    pass


# representation variety
class IntegerOrder(ConesurfError):
    pass


class TrivialCharacter(ConesurfError):
    pass


class NullCohomologyClass(ConesurfError):
    pass


class MarkingInvalid(ConesurfError):
    pass


class NonpositiveScale(ConesurfError):
    pass


class ShapeMismatch(ConesurfError):
    pass


class HypothesisViolated(ConesurfError):
    pass


# builders
class DegenerateSpec(ConesurfError):
    pass
