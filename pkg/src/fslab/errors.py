"""Exception types shared across fslab."""


class FslabError(Exception):
    """Base class for all fslab errors."""


class UsageError(FslabError, ValueError):
    """Arguments are well-typed but violate an operation's preconditions."""


class DomainError(FslabError, ValueError):
    """A function's support or extent is incompatible with the request."""


class ResolutionError(FslabError, ValueError):
    """The lattice is too coarse for an exact computation."""


class ExperimentError(FslabError, RuntimeError):
    """An experiment produced too few usable data points."""


class ResourceError(FslabError, RuntimeError):
    """The requested instance is too large to compute."""


class ResolutionWarning(UserWarning):
    """A scale below the lattice spacing was requested; the value is degenerate."""
