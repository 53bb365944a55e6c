"""Exception types shared across the package."""


class LatticeError(Exception):
    """Base class for every error raised by this package."""


# construction / validation
class DuplicateId(LatticeError):
    pass


class NonPositiveWeight(LatticeError):
    pass


class BadExponent(LatticeError):
    pass


class NonFiniteValue(LatticeError):
    pass


class UnknownCell(LatticeError):
    pass


class SpaceMismatch(LatticeError):
    pass


class BadFractions(LatticeError):
    pass


class NonPositiveDensity(LatticeError):
    pass


# type space
class BadR(LatticeError):
    pass


class SublatticeMismatch(LatticeError):
    pass


class ArityMismatch(LatticeError):
    pass


class InvalidDistribution(LatticeError):
    pass


class TargetOutOfRange(LatticeError):
    pass


# independence
class PreconditionFailed(LatticeError):
    pass


class NonTermination(LatticeError):
    pass


class CertificationFailed(LatticeError):
    """A certified construction failed its mandatory verification."""


# oracles
class GuardExceeded(LatticeError):
    pass


class MassMismatch(LatticeError):
    pass


# cli / documents
class ParseError(LatticeError):
    pass


class ValidationError(LatticeError):
    pass


class UnknownReference(LatticeError):
    pass
