"""Exception hierarchy shared by every module."""


class ChernRicciError(Exception):
    """Base class for all library errors."""


class InvariantViolation(ChernRicciError, ValueError):
    """An input fails one of its structural invariants.

    ``name`` identifies the violated condition and ``residual`` the
    measured size of the violation, so callers (and the CLI) can report
    both.
    """

    def __init__(self, name, residual=None, message=None):
        self.name = name
        self.residual = residual
        if message is None:
            message = name if residual is None else f"{name} (residual {residual:.3e})"
        super().__init__(message)


class DomainError(ChernRicciError, ValueError):
    """A time or parameter lies outside the admissible domain."""


class NonInvertibleError(ChernRicciError, ValueError):
    pass
