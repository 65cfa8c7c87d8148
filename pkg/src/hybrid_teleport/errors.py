"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the region where a formula is defined."""


class SingularityError(DomainError):
    """A closed form hits a pole (e.g. ``k1 * B == k2`` for even outcomes)."""


class InfeasibleError(RuntimeError):
    """A root or optimum does not exist inside the requested search region."""


class TruncationError(RuntimeError):
    """The Fock cutoff is too small for the requested accuracy."""
