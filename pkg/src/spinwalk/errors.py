"""Exception hierarchy shared by the library and the command-line front end."""


class SpinwalkError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SpinwalkError, ValueError):
    """An argument lies outside the domain of the operation."""


class GridResolutionError(DomainError):
    """A momentum grid is too coarse or too narrow for the requested state."""


class NumericalFailure(SpinwalkError, RuntimeError):
    """A numerical procedure did not reach its accuracy target."""


class DriftOutOfBoxError(NumericalFailure):
    """Probability reached the edge of a periodic box (aliasing risk)."""
