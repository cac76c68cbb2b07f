"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all wavelattice errors."""


class TruncationRangeError(ToolkitError):
    """A matrix power outside the cached truncation range was requested."""


class ScaleRangeError(ToolkitError):
    """A wavelet is not resolvable on the grid at a requested scale."""


class ResourceLimitError(ToolkitError):
    """An enumeration would exceed the configured point budget."""


class SpectrumDomainError(ToolkitError):
    """A sampled spectrum was queried outside its sample domain."""


class UnsupportedDilationError(ToolkitError):
    """The dilation's spectrum does not localize the requested check."""


class NumericError(ToolkitError):
    """A numerical invariant failed (NaN spectrum, singular matrix, ...)."""


class ConfigError(ToolkitError):
    """An experiment configuration failed to parse or validate."""
