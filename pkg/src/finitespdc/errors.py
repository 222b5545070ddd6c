"""Exception types raised by the simulator."""


class SPDCError(Exception):
    """Base class for all simulator errors."""


class PhysicsDomainError(SPDCError):
    """A requested configuration has no physical solution."""


class EvanescentMode(PhysicsDomainError):
    """The transverse wave vector lies outside the propagating disk."""


class NoPhaseMatch(PhysicsDomainError):
    """The pump wave number cannot be matched by any degenerate pair."""


class NoConvergence(SPDCError):
    """A bracketed root solve failed to reach tolerance."""


class DegenerateDirection(SPDCError):
    """Wave vector parallel to the optic axis; the o/e basis is undefined."""


class DegenerateConstraint(PhysicsDomainError):
    """The linear phase-match constraint cannot be solved for k_ey."""


class DegenerateSettings(SPDCError):
    """All four outcomes of an analyzer pair have zero probability."""


class BasisMismatch(SPDCError):
    """Analyzer and field form refer to different beams."""


class DomainError(SPDCError):
    """Argument outside the domain of a closed-form expression."""


class ConfigError(SPDCError):
    """Invalid run configuration."""
