"""Exception types shared across the package."""


class StructuralError(ValueError):
    """Objects live on different charts, or an index/variable is out of range."""


class ConventionError(RuntimeError):
    """Two independent computations of the same quantity disagree."""
