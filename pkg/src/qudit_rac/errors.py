"""Exception types shared across the package."""


class InvalidDimension(ValueError):
    """Dimension or alphabet size outside the supported range."""


class DimensionMismatch(ValueError):
    """Operands live in spaces of different dimension."""


class InvalidArgument(ValueError):
    """A symbol, index or parameter is out of range."""


class InstanceTooLarge(ValueError):
    """An exhaustive enumeration would exceed its guard."""


class Infeasible(RuntimeError):
    """No admissible parameter point was found."""


class NumericalFailure(RuntimeError):
    """An iterative numerical routine failed to converge."""


class ParseError(ValueError):
    """A data file does not conform to its schema."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
