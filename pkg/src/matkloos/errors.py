"""Exception types shared across the package."""


class MatKloosError(Exception):
    """Base class for all package errors."""


class CompositeP(MatKloosError, ValueError):
    """A characteristic that is not prime."""


class ReducibleModulus(MatKloosError, ValueError):
    """A field modulus that is not irreducible over F_p."""


class DegreeMismatch(MatKloosError, ValueError):
    """A polynomial or extension degree that does not match the context."""


class PrimeMismatch(MatKloosError, ValueError):
    """Mixing values that live over different primes p."""


class FieldMismatch(MatKloosError, ValueError):
    """Mixing elements of two different field contexts."""


class ZeroPolynomial(MatKloosError, ValueError):
    """The zero polynomial where a nonzero one is required."""


class SingularMatrix(MatKloosError, ValueError):
    """A matrix inversion applied to a singular matrix."""


class DimensionMismatch(MatKloosError, ValueError):
    """Matrix or vector shapes that do not line up."""


class NonCanonicalPartition(MatKloosError, ValueError):
    """A partition whose parts are not positive and non-decreasing."""


class EmptyPartition(MatKloosError, ValueError):
    """An empty partition where a nonempty one is required."""


class NotInvolution(MatKloosError, ValueError):
    """A permutation that does not square to the identity."""


class RangeError(MatKloosError, ValueError):
    """An index or parameter outside its documented range."""


class BudgetExceeded(MatKloosError, RuntimeError):
    """An enumeration whose size exceeds the configured budget."""


class NoExactPath(MatKloosError, RuntimeError):
    """No exact evaluation route exists under the given policy."""
