"""Exception types raised across the package."""


class WalkError(Exception):
    """Base class for all package errors."""


class ConfigError(WalkError, ValueError):
    """Malformed lattice, state or run configuration."""


class PhysicalityError(WalkError, ValueError):
    """A density matrix or parameter set that cannot describe a physical state."""


class MarginError(WalkError, ValueError):
    """The infinite-lattice Bessel form is used beyond its wrap-around margin."""
