"""Exception hierarchy shared by all modules."""


class PoissonSplitError(Exception):
    """Base class for every error raised by this package."""


class NotPrime(PoissonSplitError, ValueError):
    pass


class PrimeTooSmall(PoissonSplitError, ValueError):
    pass


class DenominatorDivisibleByP(PoissonSplitError, ZeroDivisionError):
    pass


class DivisionByZero(PoissonSplitError, ZeroDivisionError):
    pass


class ArityMismatch(PoissonSplitError, ValueError):
    pass


class DimensionMismatch(PoissonSplitError, ValueError):
    pass


class ParseError(PoissonSplitError, ValueError):
    pass


class UnsupportedType(PoissonSplitError, ValueError):
    pass


class IndexOutOfRange(PoissonSplitError, IndexError):
    pass


class LengthMismatch(PoissonSplitError, ValueError):
    pass


class EigenvalueZero(PoissonSplitError, ValueError):
    pass


class InvalidDelta(PoissonSplitError, ValueError):
    pass


class JacobiFailure(PoissonSplitError, ValueError):
    pass


class HypothesisFailed(PoissonSplitError, ValueError):
    """Raised when rank(pi) != rank(pi_0), so the certificate construction does not apply."""


class CertificateNotFound(PoissonSplitError, AssertionError):
    pass


class BadPrime(PoissonSplitError, ValueError):
    pass


class NotASplitting(PoissonSplitError, ValueError):
    pass
