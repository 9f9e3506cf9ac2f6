"""Exception types shared across the package."""


class LinsiteError(Exception):
    """Base class for all package errors."""


class FieldMismatch(LinsiteError, ValueError):
    """Operands live over different fields."""


class ShapeError(LinsiteError, ValueError):
    """Matrix dimensions are incompatible."""


class ValidationError(LinsiteError, ValueError):
    """Input data violates a structural law (associativity, functoriality, ...)."""


class NotFinite(LinsiteError):
    """A quiver with relations has infinite-dimensional path spaces."""


class WindowOverflow(LinsiteError):
    """A tensor product or shift leaves the graded window."""


class TargetMismatch(LinsiteError, ValueError):
    """Morphisms that should share a target do not."""


class ApexMismatch(LinsiteError, ValueError):
    """Sieves on different objects were combined."""


class NotAComplex(LinsiteError, ValueError):
    """A pair of presheaf maps does not compose to zero."""


class TooLarge(LinsiteError):
    """An enumeration would exceed its configured cap."""


class Unsupported(LinsiteError):
    """The operation is not available for this field or input."""


class Unstable(LinsiteError):
    """A stabilizing colimit did not stabilize within the allowed stages."""

    def __init__(self, message, chain=None):
        super().__init__(message)
        self.chain = list(chain or [])
