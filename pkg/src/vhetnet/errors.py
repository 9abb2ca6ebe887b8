"""Exception hierarchy shared across the package."""


class VHetNetError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(VHetNetError, ValueError):
    """An argument lies outside its mathematical domain."""


class ConfigurationError(VHetNetError, ValueError):
    """A configuration value is invalid or inconsistent."""


class InconsistentStateError(VHetNetError, ValueError):
    """A network state violates the OFF-implies-zero-load rule or goes negative."""


class InfeasibleTransitionError(VHetNetError, ValueError):
    """A switch transition would exceed a target's capacity or is a no-op."""


class InfeasibleDemandError(VHetNetError, ValueError):
    """Offered traffic cannot be served by the network."""
