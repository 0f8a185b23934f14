"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each failure gets its own class.
"""


class GeometryError(Exception):
    """Base class. ``step`` is set when the failure happened inside an iteration."""

    step = None


class ModeMismatch(GeometryError, TypeError):
    pass


class TagMismatch(GeometryError, TypeError):
    pass


class PointAtInfinity(GeometryError):
    pass


class DegenerateJoin(GeometryError):
    pass


class DegenerateMeet(GeometryError):
    pass


class DegeneratePolygon(GeometryError, ValueError):
    pass


class NotConvex(GeometryError, ValueError):
    pass


class DegenerateOutput(GeometryError):
    pass


class IterationLimitExceeded(GeometryError):
    pass


class DegenerateTriple(GeometryError):
    def __init__(self, index, n=None):
        self.index = index
        self.n = n
        if n is None:
            msg = f"degenerate consecutive triple centred at vertex {index}"
        else:
            msg = (
                f"vertices {(index - 1) % n}, {index}, {(index + 1) % n} are collinear "
                f"(triple centred at vertex {index})"
            )
        super().__init__(msg)


class SingularTransform(GeometryError, ValueError):
    pass


class NonSimpleEigenvalue(GeometryError):
    pass


class NotAnEigenvalue(GeometryError):
    pass


class EigenvectorAtInfinity(GeometryError):
    pass


class NoCandidateInHull(GeometryError):
    pass


class AmbiguousSelection(GeometryError):
    pass


class NotAxisAligned(GeometryError, ValueError):
    pass
