"""Exception types shared across the package."""


class FracubeError(Exception):
    """Base class for all package errors."""


class ParseError(FracubeError):
    """Digit-set text is malformed."""


class DuplicateDigit(ParseError):
    """The same digit appears twice in a digit-set literal."""


class OutOfRange(ParseError):
    """A digit coordinate falls outside {0, ..., n-1}."""


class NotSingleton(FracubeError):
    """Point extraction requested for a face that is not a singleton."""


class OnePointViolation(FracubeError):
    """Operation requires the one-point intersection property."""


class Disconnected(FracubeError):
    """Operation requires a connected attractor."""


class TooLarge(FracubeError):
    """Graph exceeds the supported vertex count."""


class InternalInconsistency(FracubeError):
    """Two decision routes that must agree produced different answers."""


class LabelConflict(FracubeError):
    """Two labels resolved to the same graph code."""


class UnknownCode(FracubeError):
    """A labelled digit set produced a graph code absent from the report."""


class BudgetExceeded(FracubeError):
    """Requested voxel depth exceeds the cell budget."""


class DepthTooSmall(FracubeError):
    """Path enumeration did not stabilize within the depth limit."""


class DataIntegrityError(FracubeError):
    """Bundled data file does not match its recorded checksum."""
