"""Exception types shared across the package."""


class ForgeError(Exception):
    """Base class for every error raised by spforge."""


class NotPrime(ForgeError, ValueError):
    pass


class NotPrimePower(ForgeError, ValueError):
    pass


class FieldOverflow(ForgeError, OverflowError):
    pass


class DivisionByZero(ForgeError, ZeroDivisionError):
    pass


class FieldMismatch(ForgeError, TypeError):
    pass


class BadTower(ForgeError, ValueError):
    """Requested subfield order is not a subfield of the ambient field."""


class BadHypothesis(ForgeError, ValueError):
    """A standing hypothesis (q >= 5, p does not divide n, ...) is violated."""


class NotIrreducible(ForgeError, ValueError):
    pass


class NotSymplectic(ForgeError, ValueError):
    pass


class CapExceeded(ForgeError, RuntimeError):
    def __init__(self, what, size, cap):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class NotGSp(ForgeError, ValueError):
    pass


class ZeroVector(ForgeError, ValueError):
    pass


class ZeroScalar(ForgeError, ValueError):
    pass


class NotIndependent(ForgeError, ValueError):
    pass


class NoInvariantForm(ForgeError, AssertionError):
    pass


class NoTransvection(ForgeError, ValueError):
    pass


class OutsideTrichotomy(ForgeError, ValueError):
    """A transvection-containing group fits none of the three cases; ``witness``
    is an invariant subspace on which the form is degenerate."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


class Unsupported(ForgeError, ValueError):
    """Input lies outside the desk-scale range the routine supports."""


class ParseError(ForgeError, ValueError):
    pass
