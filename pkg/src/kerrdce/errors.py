"""Typed exceptions and warning categories shared across the package."""


class KerrdceError(Exception):
    """Base class for all package errors."""


class ValidationError(KerrdceError, ValueError):
    """A parameter or configuration value violates its contract."""


class ConfigError(ValidationError):
    """A scenario or integrator configuration is inconsistent."""


class EigensolverError(KerrdceError):
    """Diagonalization output failed a residual or unitarity check."""


class LadderError(KerrdceError):
    """The photon ladder could not be identified in the dressed spectrum."""


class DispersiveRegimeError(KerrdceError):
    """Perturbative formulas were requested outside their validity range."""


class TruncationError(KerrdceError):
    """Fock-space truncation stayed inadequate after all escalations."""


class IntegratorDivergenceError(KerrdceError):
    """Norm drift exceeded the hard abort threshold during integration."""


class NoResonanceError(KerrdceError):
    """The probed bracket showed no usable growth maximum."""


class DispersiveLimitWarning(UserWarning):
    """Qubit-cavity mixing is strong enough to strain dispersive estimates."""


class TruncationWarning(UserWarning):
    """An operator or state is close to the edge of its truncated space."""


class RwaValidityWarning(UserWarning):
    """A retained rotating-wave term has a phase amplitude outside the safe range."""
