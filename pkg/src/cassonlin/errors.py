"""Exceptions raised across the package."""


class CassonLinError(Exception):
    """Base class for all package errors."""


class BraidSyntaxError(CassonLinError, ValueError):
    """A braid word does not match the grammar."""


class NotUnitError(CassonLinError, ValueError):
    """A quaternion expected to be unit (or traceless unit) is not."""


class NotTwoComponents(CassonLinError):
    """The braid closure is not a 2-component link."""


class NotOnPillowcase(CassonLinError):
    """A quadruple violates ab = cd."""


class SingularPoint(CassonLinError):
    """A configuration sits at one of the four corners of the pillowcase."""


class ReduciblePoint(CassonLinError):
    """The conjugation orbit through a point is not 3-dimensional."""


class DegenerateComplement(CassonLinError):
    """No triple of tangent vectors maps onto su(2) under df."""


class DegenerateFrame(CassonLinError):
    """A frame is (numerically) linearly dependent or not in the reference span."""


class TangencyUnresolved(CassonLinError):
    """An intersection of the two curves is not transverse."""


class UnsupportedEpsilon(CassonLinError, ValueError):
    """A sign tuple other than (-1, -1) was requested for a 2-strand braid."""
