"""Shared exception types."""


class ArityError(ValueError):
    """An expression, feature map, or layer was used with the wrong arity."""


class ModeError(ValueError):
    """A compilation mode was requested that does not apply to the expression."""


class CertificateError(RuntimeError):
    """An approximation certificate could not be established within budget."""
