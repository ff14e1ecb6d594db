"""Exception hierarchy shared by all modules."""


class Su11Error(Exception):
    """Base class for errors raised by su11ep."""


class RegimeError(Su11Error, ValueError):
    """Operation is undefined on this side of (or at) the exceptional point."""


class DimensionError(Su11Error, ValueError):
    """Matrix dimension is too small, too large, or mismatched."""


class BasisError(Su11Error, ValueError):
    """Binary operation between operators tagged with different bases."""


class ConvergenceError(Su11Error, ArithmeticError):
    """Iteration cap hit or norm overflow."""


class FrameError(Su11Error, ValueError):
    """Phase-space point given in the wrong frame."""


class StepError(Su11Error, ArithmeticError):
    """Integrator produced a non-finite state."""


class DomainWarning(UserWarning):
    """Grid box is too small to hold the requested levels."""
