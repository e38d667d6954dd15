"""Exception types shared across the package."""


class SelmerchiError(Exception):
    """Base class for all package errors."""


class NonRational(SelmerchiError):
    """Curve coefficient could not be parsed as an exact rational."""


class SingularModel(SelmerchiError):
    """The Weierstrass model has discriminant zero."""


class NotIntegralAt(SelmerchiError):
    """A coefficient has negative valuation at the reduction prime."""

    def __init__(self, prime, message=None):
        self.prime = prime
        super().__init__(message or f"model is not integral at {prime}")


class SingularCurve(SelmerchiError):
    """Point counting was asked for a singular reduced curve."""


class PrimeTooLarge(SelmerchiError):
    """Point counting prime exceeds the supported bound."""


class EvenOrCompositeP(SelmerchiError):
    """The Iwasawa prime p must be an odd prime."""


class SignLengthMismatch(SelmerchiError):
    """Sign vector length does not match the number of supersingular primes."""


class TooManySigns(SelmerchiError):
    """Sign sweep would enumerate more than 2**10 vectors."""


class NonPPower(SelmerchiError):
    """A value that must be a power of p is not one."""


class HypothesisFailure(SelmerchiError):
    """A required hypothesis fails and no override was requested."""

    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or "hypothesis check failed")


class NonFiniteInvariants(SelmerchiError):
    """Characteristic series vanishes at T = 0; Euler characteristic undefined."""


class PrecisionExhausted(SelmerchiError):
    """Valuation of the constant term reaches the declared p-adic precision."""
