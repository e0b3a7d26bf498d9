"""Exception hierarchy shared by all modules."""


class CvreconError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CvreconError, ValueError):
    """An argument lies outside the domain of the operation."""


class InfeasibleError(CvreconError):
    """The requested operating point cannot yield a secret key."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class ParameterMismatchError(CvreconError, ValueError):
    """Two Monte Carlo reports describe different experiments."""


class ResourceCapError(CvreconError):
    """A simulation would exceed the configured work cap."""
