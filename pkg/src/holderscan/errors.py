"""Exception types shared across the package.

The CLI maps these onto exit codes: input/format problems exit 2,
configuration problems exit 3, numerical failures exit 4.
"""


class ParameterError(ValueError):
    """An argument or configuration value is outside its admissible range."""


class DimensionError(ValueError):
    """A curve, matrix or operator does not conform to its grid or sample."""


class FormatError(ValueError):
    """An input file is malformed."""


class NumericalError(RuntimeError):
    """A numerical routine produced an unusable result."""
