"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for all geometric errors raised by polyshadow."""


class DegenerateInput(GeometryError):
    """Input point set is not full-dimensional."""


class ZeroDirection(GeometryError):
    """A direction vector was zero."""


class NotSymmetric(GeometryError):
    """An extreme point of the input lacks its negative."""


class OriginNotInterior(GeometryError):
    """The origin is not strictly inside the body."""


class UnknownBody(GeometryError):
    """Unrecognised builtin body name."""


class CollinearPoint(GeometryError):
    """Point lies on the axis spanned by the direction vector."""


class LambdaTooSmall(GeometryError):
    """Parameter value below the first contact value; the set is empty."""


class PointNotOnSphere(GeometryError):
    """Point does not lie on the requested parameter sphere."""


class CurveDegenerate(GeometryError):
    """No longitudinal curve exists through the point."""


class EmptyComplex(GeometryError):
    """Operation requires a nonempty cell complex."""
