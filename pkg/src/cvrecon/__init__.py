"""Reconciliation feasibility analysis for reverse-reconciliation CV-QKD.

Computes the information budget of a lossy Gaussian channel, the digit
quantization it implies, the minimum error-correction block size and how
the decoding cost grows with fiber length.  A seeded Monte Carlo module
checks the Gaussian approximation of the binomial error count.
"""

from .errors import (
    CvreconError,
    DomainError,
    InfeasibleError,
    ParameterMismatchError,
    ResourceCapError,
)
from .numerics import (
    binary_entropy,
    binomial_tail_exact,
    gaussian_tail,
    gaussian_tail_inverse,
    inv_binary_entropy,
)
from .channel import ChannelPoint, InfoBudget, propagate, transmission_from_distance
from .budget import (
    AuditReport,
    BlockBound,
    ComplexityEstimate,
    DigitPlan,
    ScalingMode,
    audit_worked_example,
    block_size_bound,
    plan_quantization,
    relative_complexity,
)
from .montecarlo import (
    MonteCarloReport,
    beta_gaussian,
    merge_reports,
    simulate_error_counts,
)

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "BlockBound",
    "ChannelPoint",
    "ComplexityEstimate",
    "CvreconError",
    "DigitPlan",
    "DomainError",
    "InfeasibleError",
    "InfoBudget",
    "MonteCarloReport",
    "ParameterMismatchError",
    "ResourceCapError",
    "ScalingMode",
    "audit_worked_example",
    "beta_gaussian",
    "binary_entropy",
    "binomial_tail_exact",
    "block_size_bound",
    "gaussian_tail",
    "gaussian_tail_inverse",
    "inv_binary_entropy",
    "merge_reports",
    "plan_quantization",
    "propagate",
    "relative_complexity",
    "simulate_error_counts",
    "transmission_from_distance",
]
