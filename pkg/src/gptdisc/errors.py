"""Exception hierarchy shared across the package."""


class GptDiscError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(GptDiscError, ValueError):
    """Malformed or inconsistent input (dimension mismatch, bad file, ...)."""


class PreconditionError(GptDiscError, ValueError):
    """A documented precondition of an operation does not hold."""


class UnsupportedDimensionError(GptDiscError, ValueError):
    """Ambient dimension exceeds the desk-scale bound of an algorithm."""


class UnsupportedSizeError(GptDiscError, ValueError):
    """Problem size exceeds the combinatorial bound of a brute-force routine."""


class UndefinedRatioError(GptDiscError, ValueError):
    """The polytope ratio is undefined (all complementary pairs degenerate)."""


class NumericalFailureError(GptDiscError, RuntimeError):
    """A numerical routine failed to converge (e.g. simplex cycling guard)."""


class InternalInconsistencyError(GptDiscError, RuntimeError):
    """An internal cross-check failed; indicates a solver bug, not bad input."""
