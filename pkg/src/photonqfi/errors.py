"""Exception types raised by photonqfi."""


class PhotonQfiError(Exception):
    """Base class for all library errors."""


class DomainError(PhotonQfiError, ValueError):
    """Input lies outside the mathematical domain of an operation.

    Examples are photon subtraction from the exact vacuum or evaluating a
    closed form at its singular point.
    """


class ContractError(PhotonQfiError, ValueError):
    """Arguments violate a documented precondition (index ranges, special-case restrictions)."""


class ResourceError(PhotonQfiError, RuntimeError):
    """A truncated Fock computation would need more basis states than allowed."""


class HeraldingError(DomainError):
    """The heralding event has (numerically) zero probability."""


class NormalizationError(PhotonQfiError, ArithmeticError):
    """A state that should be normalized is not."""
