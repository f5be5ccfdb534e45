"""Exception types raised across the package."""


class InvalidState(ValueError):
    """Input does not describe a valid qubit state."""


class LengthExceedsOne(InvalidState):
    """Bloch vector longer than 1 beyond tolerance."""


class CardinalityMismatch(ValueError):
    """Weight vector length differs from the available set size."""


class PureStateUnsupported(ValueError):
    """KKT certificate requested for a (near) pure target."""


class NotInRegion(ValueError):
    """Point lies outside the region required by the operation."""


class SamplingExhausted(RuntimeError):
    """Rejection sampler failed to populate a region."""


class NonConvergenceWarning(RuntimeWarning):
    """Oracle polish stopped before reaching its step tolerance."""
