"""Exception types shared across the package.

All validation failures derive from ValueError so callers can treat
"bad input" uniformly; runtime solver failures derive from RuntimeError.
"""


class DomainError(ValueError):
    """A density, slope, or coordinate lies outside its admissible range."""


class LevelError(ValueError):
    """A flux level lies outside [0, capacity] of the relevant flux."""


class ConfigError(ValueError):
    """A scenario configuration document was rejected; message carries the field path."""


class GridMismatchError(ValueError):
    """Two discrete fields that must share a grid do not."""


class StepError(RuntimeError):
    """A time step violated the CFL bound or produced an inadmissible state."""
