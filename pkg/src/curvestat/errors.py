"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Arguments violate an operation's preconditions."""


class EmptyErosionError(InvalidInputError):
    """Eroding a window left no interior."""


class EstimationError(RuntimeError):
    """The data cannot support the requested estimate."""


class CoxSampleError(EstimationError):
    """Cox sampling yielded too few points to estimate anything.

    The realized counts are kept so callers can decide to resample with a
    higher rate or a different seed.
    """

    def __init__(self, message, n_interior=0, n_guard=0):
        super().__init__(message)
        self.n_interior = n_interior
        self.n_guard = n_guard


class DataFormatError(ValueError):
    """A data file failed to parse or declares an unsupported schema."""
