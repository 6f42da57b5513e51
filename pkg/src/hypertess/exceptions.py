"""Exception types shared across the library.

Everything subclasses ValueError so callers who don't care about the fine
distinctions can catch the usual thing.
"""


class HypertessError(Exception):
    """Base class for all library errors."""


class InvalidDimensionError(HypertessError, ValueError):
    """A requested shape has a zero or negative extent."""


class DimensionMismatchError(HypertessError, ValueError):
    """Two objects that must share a dimension do not."""


class DegenerateInputError(HypertessError, ValueError):
    """Input is degenerate for the operation (zero vector, all points equal)."""


class EmptyInputError(HypertessError, ValueError):
    """An operation that needs at least one element got none."""


class NotCoveredError(HypertessError, ValueError):
    """A point lies farther than epsilon from every net center."""


class InsufficientTrialsError(HypertessError, ValueError):
    """A Monte-Carlo estimate needs at least two trials."""


class ContinuityPreconditionError(HypertessError, ValueError):
    """Perturbation norms exceed what the continuity check assumes."""


class NormalizationRequiredError(HypertessError, ValueError):
    """Affine arrangements require a diameter-normalized point cloud."""


class FileFormatError(HypertessError, ValueError):
    """A binary or text file does not match its declared format."""
