"""Exception types shared across the package."""


class K3ShimError(Exception):
    """Base class for all package errors."""


class InvalidPrime(K3ShimError, ValueError):
    pass


class NotRecognized(K3ShimError):
    """Reconstruction (rational or algebraic) found no candidate."""


class PrecisionLost(K3ShimError):
    pass


class NoSquareRootAtPoint(K3ShimError):
    pass


class DegenerateBasis(K3ShimError):
    pass


class ComputationMismatch(K3ShimError):
    """A derivation produced something other than the expected object."""


class VerificationFailed(K3ShimError):
    def __init__(self, message: str, expected=None, got=None):
        super().__init__(message)
        self.expected = expected
        self.got = got
