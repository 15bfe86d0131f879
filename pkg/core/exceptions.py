class SBoxError(Exception):
    """Base class for all sboxforge exceptions."""
    pass

class LengthMismatchError(SBoxError):
    """Raised when a lookup table does not hold exactly 2^n entries."""
    pass

class NotBijectiveError(SBoxError):
    """Raised when a lookup table repeats a value (or leaves the range [0, 2^n))."""
    pass

class IndexOutOfRangeError(SBoxError):
    """Raised when a swap index falls outside the table."""
    pass

class IdenticalIndicesError(SBoxError):
    """Raised when a swap is requested between a position and itself."""
    pass

class ZeroSelectorError(SBoxError):
    """Raised when the zero output mask is used to select a component function."""
    pass

class CostOverflowError(SBoxError):
    """Raised when an exact integer cost no longer fits the configured bit width."""
    pass

class SBoxFormatError(SBoxError):
    """Raised when an S-box text file does not follow the strict format."""
    pass

class ConfigurationError(SBoxError):
    """Raised when search parameters, sweep grids or config files are invalid."""
    pass
