"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """Requested computation exceeds the configured size caps."""


class NumericalError(RuntimeError):
    """An underlying numerical routine failed to converge or returned garbage."""
