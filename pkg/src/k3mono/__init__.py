"""Certified monodromy of a K3 Picard-Fuchs system.

Validated-numerics library and CLI: interval arithmetic over binary64
and double-double scalars, Taylor-jet transport of a Pfaffian system
along explicit contours, series enclosures of the fundamental matrix at
the base point, and exact integer certification of the resulting
monodromy matrices.
"""

from .errors import (
    Ambiguous,
    CertificationError,
    ConditionViolated,
    ConvergenceViolation,
    DivisorContainsZero,
    DomainError,
    EmptyIntersection,
    MinStepUnderflow,
    NoInteger,
    NotContracting,
    SegmentHitsSingularity,
    SingularityProximity,
    StepRejected,
    VerificationFailed,
)
from .intervals import ComplexInterval, RealInterval, ci_arith, ri_arith
from .scalars import DD, F64, Fp, directed_round, error_free_transform

__all__ = [
    "DD",
    "F64",
    "Fp",
    "RealInterval",
    "ComplexInterval",
    "ri_arith",
    "ci_arith",
    "error_free_transform",
    "directed_round",
    "CertificationError",
    "DivisorContainsZero",
    "DomainError",
    "EmptyIntersection",
    "VerificationFailed",
    "NotContracting",
    "NoInteger",
    "Ambiguous",
    "ConditionViolated",
    "ConvergenceViolation",
    "StepRejected",
    "SingularityProximity",
    "MinStepUnderflow",
    "SegmentHitsSingularity",
]
