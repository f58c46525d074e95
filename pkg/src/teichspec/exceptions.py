"""Exception hierarchy.

Every error raised by the package derives from :class:`TeichspecError`, which
is itself a :class:`ValueError` so that callers validating user input can
catch a single type.
"""


class TeichspecError(ValueError):
    pass


# isometry layer
class MalformedIsometry(TeichspecError):
    pass


class NotHyperbolic(TeichspecError):
    pass


class CrossingGeodesics(TeichspecError):
    pass


# trigonometry
class NoSuchHexagon(TeichspecError):
    pass


class NoSuchPentagon(TeichspecError):
    pass


class CuspEndpoint(TeichspecError):
    pass


class CuspMismatch(TeichspecError):
    pass


# topology
class NonHyperbolicType(TeichspecError):
    pass


class NoBoundary(TeichspecError):
    pass


class UnsupportedFamily(TeichspecError):
    """Enumeration was requested for a surface type outside the certified families."""


# geometry
class NotHyperbolicClass(TeichspecError):
    pass


class CrossingAxes(TeichspecError):
    pass


class NumericalDegeneracy(TeichspecError):
    pass


# spectrum
class UncertifiedFamily(TeichspecError):
    pass


class IsPants(TeichspecError):
    pass


class NotInThickPart(TeichspecError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
