"""Failure taxonomy shared across the pipeline.

Every exception here voids a rigorous enclosure: callers either widen,
retry with different parameters, or report the stage that failed.  None
of them are ever swallowed into a silently wrong bound.
"""


class CertificationError(Exception):
    """Base class: a certified enclosure could not be produced."""


class DivisorContainsZero(CertificationError):
    """Interval division with 0 in the divisor.

    Also the guard that trips when a contour drifts toward the singular
    locus: the Pfaffian coefficients divide by quantities that vanish
    exactly there.
    """


class DomainError(CertificationError):
    """Elementary function evaluated outside its real domain."""


class EmptyIntersection(CertificationError):
    """Intersection of disjoint intervals was requested."""


class VerificationFailed(CertificationError):
    """Residual contraction for a verified inverse did not certify."""


class NotContracting(CertificationError):
    """Krawczyk image not in the interior of the candidate box."""


class NoInteger(CertificationError):
    """An entry's real enclosure contains no integer."""


class Ambiguous(CertificationError):
    """An entry's enclosure is too wide to isolate a unique integer."""


class ConditionViolated(CertificationError):
    """A tail-bound applicability inequality failed; carries its name."""


class ConvergenceViolation(CertificationError):
    """Series evaluated outside the certified convergence region."""


class StepRejected(CertificationError):
    """A priori tube for one integration step could not be validated."""


class SingularityProximity(CertificationError):
    """Coefficient guard failed over a step's tube."""


class MinStepUnderflow(CertificationError):
    """Step-size control drove h below the configured minimum."""


class SegmentHitsSingularity(CertificationError):
    """A contour segment's coarse tube meets a singular enclosure."""
