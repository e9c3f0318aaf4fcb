"""Exception types shared across the package."""


class ParamandelError(Exception):
    """Base class for numeric/domain failures raised by this package."""


class DegenerateParameterError(ParamandelError):
    """Parameter at which the requested construction degenerates (e.g. B=0)."""


class NotInBasinError(ParamandelError):
    """Orbit did not enter the attracting regime within the iteration budget."""


class BranchAmbiguityError(ParamandelError):
    """Both inverse branches are within tolerance of each other or of the reference."""


class BranchCutError(ParamandelError):
    """Requested value lies on the branch cut (-inf, 0] of the Fatou inverse."""


class ToleranceNotMetError(ParamandelError):
    """Iterative refinement stopped before reaching the requested tolerance."""


class NewtonDivergenceError(ParamandelError):
    """Newton continuation failed to converge; carries the last good stage."""

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class ContinuationError(ParamandelError):
    """Parameter-space continuation rejected its step down to the minimum size."""


class NotLandedError(ParamandelError):
    """Landing data requested from a ray that has not landed."""


class InvalidFractionError(ParamandelError):
    """p/q is not a reduced fraction in the admissible range."""


class SizeOverflowError(ParamandelError):
    """Requested combinatorial object exceeds the configured size cap."""


class InvalidTowerError(ParamandelError):
    """Operation requires a tower that passes validation."""


class TargetNotInCriticalValueGapError(ParamandelError):
    """Tower extension target is not inside the critical value gap."""


class UnresolvedLandingError(ParamandelError):
    """Ray landing could not be resolved at the requested depth."""

    def __init__(self, message, unresolved=()):
        super().__init__(message)
        self.unresolved = list(unresolved)


class WakeMismatchError(ParamandelError):
    """Parameter does not belong to the wake/limb required by the construction."""
