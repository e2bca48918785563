"""Exception hierarchy for omega-nil.

Library code raises these; only :mod:`omega_nil.cli` turns them into exit
statuses.
"""


class OmegaNilError(Exception):
    """Base class for every error raised by omega-nil."""


class ParseError(OmegaNilError, ValueError):
    """Malformed substitution, endomorphism, connection or group text."""


class PreconditionError(OmegaNilError, ValueError):
    """An operation was called on input outside its domain."""


class AlgebraError(OmegaNilError, ArithmeticError):
    """An exact postcondition failed to verify."""


class RayLimitExceeded(OmegaNilError, MemoryError):
    """A word expansion grew past the configured symbol limit."""


class GroupSpecError(OmegaNilError, ValueError):
    """No finite-group provider understood a group spec."""


class ConfigError(OmegaNilError, ValueError):
    """A configuration file or value is invalid."""
