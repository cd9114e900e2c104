"""Exception hierarchy shared by all skewlab modules."""


class SkewLabError(Exception):
    """Base class for all package errors (CLI maps these to exit code 2)."""


class CoordinateError(SkewLabError):
    """A point falls outside its ambient range, or a file contains duplicates."""


class ParameterError(SkewLabError):
    """Construction or search parameters are out of the supported range."""


class CapabilityError(SkewLabError):
    """The requested instance exceeds what the implementation supports."""


class FormatError(SkewLabError):
    """A skewset file does not conform to the `skewset v1` format."""


class PrecisionError(SkewLabError):
    """Floating-point residue exceeded tolerance; use an exact code path."""


class ConsistencyError(SkewLabError):
    """Two internal evaluation routes disagreed beyond tolerance."""


class FalsificationError(SkewLabError):
    """A runtime check of a proven inequality failed (CLI exit code 3).

    Distinguished from ordinary errors so that CI can tell a genuine
    mathematical falsification (or overly aggressive configured constants)
    apart from bad input.
    """
