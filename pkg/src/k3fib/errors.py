"""Exception types raised by the lattice toolkit."""


class LatticeError(ValueError):
    """Base class for all input/precondition failures."""


class NotSymmetric(LatticeError):
    pass


class NotEven(LatticeError):
    pass


class NotIntegral(LatticeError):
    pass


class DegenerateLattice(LatticeError):
    pass


class IndefiniteLattice(LatticeError):
    pass


class ZeroVector(LatticeError):
    pass


class NotPrimitive(LatticeError):
    pass


class NotIsotropic(LatticeError):
    pass


class BadPrime(LatticeError):
    pass


class InvalidParams(LatticeError):
    pass


class GroupTooLarge(LatticeError):
    pass


class GraphTooLarge(LatticeError):
    pass


class InconsistentGrouping(LatticeError):
    pass


class NotHyperbolic(LatticeError):
    pass


class CatalogError(LatticeError):
    """Malformed catalog or graph file; the message names the line and entry."""
