"""Exception types shared across the package."""


class BirdegError(Exception):
    pass


class ShapeMismatch(BirdegError, ValueError):
    pass


class DegreeMismatch(BirdegError, ValueError):
    pass


class ZeroPolynomialError(BirdegError, ValueError):
    pass


class NotDivisible(BirdegError, ArithmeticError):
    pass


class GuardExceeded(BirdegError, RuntimeError):
    """A term-count or degree ceiling was hit.

    ``partial`` is filled in by callers that have useful work to report,
    e.g. a degree sequence cut short at some iterate.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class CollapseError(BirdegError, ArithmeticError):
    """Every component of some target block became zero."""


class NotUnimodular(BirdegError, ValueError):
    pass


class SingularMatrix(BirdegError, ValueError):
    pass


class SpectralError(BirdegError, ArithmeticError):
    pass


class CertificateFailure(BirdegError):
    pass
