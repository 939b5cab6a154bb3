"""Exception hierarchy shared by every module."""


class SpeccalcError(Exception):
    pass


class InputError(SpeccalcError, ValueError):
    """Malformed or inconsistent input (wrong ambient ring, bad syntax, ...)."""


class DomainError(SpeccalcError, ValueError):
    """Well-formed input outside the domain of an operation."""


class ResourceError(SpeccalcError):
    """A desk-scale guard was exceeded."""


class InternalError(SpeccalcError, RuntimeError):
    """A runtime invariant failed; indicates a bug rather than bad input."""


class StabilityError(InternalError):
    pass


class SoundnessAlarm(InternalError):
    """A Coherent verdict was contradicted by a computed complex."""
