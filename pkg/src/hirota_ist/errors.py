"""Exception and warning types shared across the toolkit."""


class HirotaError(Exception):
    """Base class for all toolkit errors."""


class SingularMatrix(HirotaError):
    """Matrix determinant below the singularity threshold."""


class ZeroArgument(HirotaError):
    """Spectral-plane map evaluated at (or too close to) z = 0."""


class BadContour(HirotaError):
    """Contour parameters are inconsistent (e.g. truncation inside the circle)."""


class MissingDerivatives(HirotaError):
    """Potential sample lacks the x-derivatives needed for the time generator."""


class BranchPointSingular(HirotaError):
    """Operation requested at (or too close to) a branch point where gamma = 0."""


class IntegrationFailure(HirotaError):
    """ODE integration did not reach the matching point within tolerance."""


class SingularWronskian(HirotaError):
    """Jost matrix at the matching point is numerically singular."""


class MissingPartner(HirotaError):
    """A symmetry audit needs a sample at z* or sigma*k0^2/z that is absent."""


class DefocusingUnsupported(HirotaError):
    """Soliton construction requested in the defocusing (sigma = +1) regime."""


class EigenvalueTooCloseToSigma(HirotaError):
    """Seed eigenvalue too close to the real axis; the pole structure degenerates."""


class EigenvalueRegionError(HirotaError):
    """Seed eigenvalue violates the admissible-region precondition."""


class DuplicateEigenvalue(HirotaError):
    """Two quartet-expanded eigenvalues coincide within tolerance."""


class PoleCollision(HirotaError):
    """Two pole locations of the reflectionless system coincide."""


class SingularSystem(HirotaError):
    """Reflectionless linear system is numerically singular (cond > 1e12)."""


class PoleHit(HirotaError):
    """Trace-formula product evaluated at one of its pole locations."""


class UnknownPreset(HirotaError):
    """Requested preset name is not in the table."""


class NoConvergenceWarning(UserWarning):
    """Zero refinement failed in one search cell; reported, not fatal."""
