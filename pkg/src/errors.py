"""
Exception hierarchy for MapForge.

Every error derives from ValueError so callers that already guard numeric
input with ``except ValueError`` keep working.
"""


class MapForgeError(ValueError):
    """Base class for all MapForge errors"""


class DegenerateCellError(MapForgeError):
    """A cell or set with a zero side length or zero volume where a positive one is required"""


class EmptyCellError(MapForgeError):
    """A cell holding no sample point where at least one is required"""


class DatasetFormatError(MapForgeError):
    """Malformed, empty or dimension-mismatched dataset input"""


class ParameterRangeError(MapForgeError):
    """A parameter outside the range where a bound or experiment is defined"""


class SeedRequiredError(MapForgeError):
    """No master seed supplied to a reproducible run"""
