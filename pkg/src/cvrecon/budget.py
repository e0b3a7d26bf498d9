"""Quantization plan, minimum block size and complexity scaling.

Everything here runs on the binary symmetric model: each continuous key
element becomes ``d`` independent digits with a common bit error rate, and a
threshold decoder fixes any block whose error fraction stays at or below
``e_rec``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Any, Optional

from .channel import ChannelPoint, InfoBudget, propagate
from .errors import DomainError, InfeasibleError
from .numerics import binary_entropy, gaussian_tail_inverse, inv_binary_entropy

DEFAULT_BETA_FAIL = 1e-7
DEFAULT_HEADROOM = 0.5
LDPC_REFERENCE_GAP_DB = 0.0045
# Transmission of the 3.1 dB (15.5 km) link used as the complexity baseline.
REFERENCE_TRANSMISSION = 0.49


class ScalingMode(str, enum.Enum):
    POWER_LAW_ETA4 = "power_law_eta4"
    FULL_PIPELINE = "full_pipeline"


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def _from_fields(cls, d: dict[str, Any], tol: float):
    obj = object.__new__(cls)
    for name in cls.__dataclass_fields__:
        object.__setattr__(obj, name, d[name])
    obj.check(tol)
    return obj


@dataclass(frozen=True)
class DigitPlan:
    """Outcome of quantizing one key element into binary digits.

    ``effective_digits`` is the digit count actually used for the BER and the
    per-digit secret rate: the integer ``digits_per_element`` for reports, or
    the unrounded ``fractional_digits`` (floored at 1) for smooth sweeps.
    """

    digits_per_element: int
    fractional_digits: float
    effective_digits: float
    i_ab: float
    delta_i: float
    ber: float
    entropy_per_digit: float
    secret_per_digit: float

    def __post_init__(self):
        self.check()

    def check(self, tol: float = 1e-9) -> None:
        d = self.digits_per_element
        if int(d) != d or d < 1:
            raise DomainError("digits_per_element must be an integer >= 1")
        if d != max(1, math.ceil(self.fractional_digits - tol)):
            raise DomainError("digits_per_element must be ceil(fractional_digits), at least 1")
        if not (0.0 <= self.ber <= 0.5 + tol):
            raise DomainError("ber must lie in [0, 0.5]")
        n = self.effective_digits
        if not _close(n * binary_entropy(min(self.ber, 0.5)), n - self.i_ab, tol):
            raise DomainError("digits * H(ber) must equal digits - i_ab")
        if not _close(self.secret_per_digit, self.delta_i / n, tol):
            raise DomainError("secret_per_digit must equal delta_i / digits")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any], tol: float = 1e-9) -> "DigitPlan":
        return _from_fields(cls, d, tol)


@dataclass(frozen=True)
class BlockBound:
    """Error-correction sizing for one digit plan.

    ``m_exact`` is the unrounded block length from the Gaussian tail
    condition at ``e_rec``; ``m_min`` is its ceiling.  ``m_linearized`` uses
    the first-order expansion of H around ``e_ab`` with the full per-digit
    secret rate as the gap.
    """

    ber: float
    secret_per_digit: float
    e_c: float
    e_rec: float
    headroom: float
    beta_fail: float
    q_squared: float
    m_exact: float
    m_min: int
    m_linearized: int
    net_secret_per_digit: float

    def __post_init__(self):
        self.check()

    def check(self, tol: float = 1e-10) -> None:
        if not (self.ber < self.e_rec <= self.e_c + tol and self.e_c < 0.5):
            raise DomainError("need ber < e_rec <= e_c < 0.5")
        h_ab = binary_entropy(self.ber)
        if abs(binary_entropy(self.e_c) - (h_ab + self.secret_per_digit)) > tol:
            raise DomainError("H(e_c) must equal H(ber) + secret_per_digit")
        if abs(binary_entropy(self.e_rec) - (h_ab + self.headroom * self.secret_per_digit)) > tol:
            raise DomainError("H(e_rec) must equal H(ber) + headroom * secret_per_digit")
        if int(self.m_min) != self.m_min or self.m_min < 1:
            raise DomainError("m_min must be a positive integer")
        if not (0.0 < self.headroom <= 1.0):
            raise DomainError("headroom must lie in (0, 1]")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any], tol: float = 1e-10) -> "BlockBound":
        return _from_fields(cls, d, tol)


@dataclass(frozen=True)
class ComplexityEstimate:
    block_size: int
    relative_complexity: float
    scaling_mode: ScalingMode
    reference_transmission: float

    def __post_init__(self):
        object.__setattr__(self, "scaling_mode", ScalingMode(self.scaling_mode))
        self.check()

    def check(self, tol: float = 0.0) -> None:
        if not (self.relative_complexity > 0.0):
            raise DomainError("relative_complexity must be > 0")
        if int(self.block_size) != self.block_size or self.block_size < 1:
            raise DomainError("block_size must be a positive integer")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["scaling_mode"] = self.scaling_mode.value
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any], tol: float = 0.0) -> "ComplexityEstimate":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__})


@dataclass(frozen=True)
class AuditReport:
    """Per-secret-bit accounting of the reconciliation budget.

    ``required_efficiency`` is None when no correction information is needed
    at all (error-free digits), where the ratio is meaningless.
    """

    secret_per_element: float
    digits_per_element: int
    elements_per_secret_bit: int
    digits_total: int
    leak_min_bits: int
    eve_budget_bits: int
    total_digits_plus_leak: int
    required_efficiency: Optional[float]
    required_gap_db: float
    ldpc_reference_gap_db: float = LDPC_REFERENCE_GAP_DB

    def __post_init__(self):
        self.check()

    def check(self, tol: float = 1e-9) -> None:
        if self.eve_budget_bits - self.leak_min_bits != 1:
            raise DomainError("Eve's budget exceeds the leak floor by exactly one secret bit")
        if self.digits_total != self.elements_per_secret_bit * self.digits_per_element:
            raise DomainError("digits_total must equal elements * digits")
        if self.total_digits_plus_leak != self.digits_total + self.leak_min_bits:
            raise DomainError("total must equal digits + leak")
        if self.leak_min_bits == 0:
            if self.required_efficiency is not None:
                raise DomainError("efficiency is undefined without leakage")
        elif not _close(self.required_efficiency, self.eve_budget_bits / self.leak_min_bits, tol):
            raise DomainError("efficiency must equal eve_budget / leak_min")
        gap = 10.0 * math.log10((self.digits_total + self.eve_budget_bits) / self.total_digits_plus_leak)
        if not _close(self.required_gap_db, gap, tol):
            raise DomainError("required_gap_db inconsistent with bit counts")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any], tol: float = 1e-9) -> "AuditReport":
        return _from_fields(cls, d, tol)


def plan_quantization(info: InfoBudget, fractional: bool = False) -> DigitPlan:
    """Quantize one key element so the digits resolve Eve's noise gap.

    The digit count is ``0.5*log2(v_b / noise_gap)``; the BER follows from
    the symmetric-channel identity ``d*H(ber) = d - i_ab``.  With
    ``fractional=True`` the unrounded digit count drives BER and secret rate.
    """
    if info.delta_i <= 0.0:
        raise InfeasibleError("no_secret_rate", f"delta_i={info.delta_i:.6g} <= 0")
    gap = info.noise_gap
    if gap <= 0.0:
        raise InfeasibleError("no_noise_gap", "v_b_given_e equals v_b_given_a")
    fractional_digits = 0.5 * math.log2(info.v_b / gap)
    d = max(1, math.ceil(fractional_digits))
    n = max(1.0, fractional_digits) if fractional else float(d)
    h = 1.0 - info.i_ab / n
    if h < 0.0:
        if h < -1e-12:
            raise InfeasibleError(
                "insufficient_digits",
                f"i_ab={info.i_ab:.6g} exceeds {n:.6g} digits per element",
            )
        h = 0.0
    ber = inv_binary_entropy(h)
    return DigitPlan(
        digits_per_element=d,
        fractional_digits=fractional_digits,
        effective_digits=n,
        i_ab=info.i_ab,
        delta_i=info.delta_i,
        ber=ber,
        entropy_per_digit=h,
        secret_per_digit=info.delta_i / n,
    )


def block_size_bound(
    plan: DigitPlan,
    beta_fail: float = DEFAULT_BETA_FAIL,
    headroom: float = DEFAULT_HEADROOM,
) -> BlockBound:
    """Minimum block length that corrects all errors with prob. ``1 - beta_fail``.

    ``headroom`` is the fraction of the per-digit secret rate spent as the gap
    between H(e_rec) and H(ber); the rest remains as net key.  ``headroom=1``
    pushes e_rec up to e_c and gives the absolute floor.
    """
    if not (0.0 < beta_fail < 0.5):
        raise DomainError(f"beta_fail must lie in (0, 0.5), got {beta_fail!r}")
    if not (0.0 < headroom <= 1.0):
        raise DomainError(f"headroom must lie in (0, 1], got {headroom!r}")
    e_ab, d_i = plan.ber, plan.secret_per_digit
    if d_i <= 0.0:
        raise InfeasibleError("no_secret_rate", "secret_per_digit <= 0")
    if e_ab >= 0.5:
        raise InfeasibleError("ber_at_half", "no information survives quantization")
    h_ab = binary_entropy(e_ab)
    if h_ab + d_i >= 1.0:
        raise InfeasibleError(
            "entropy_ceiling", f"H(ber) + secret_per_digit = {h_ab + d_i:.6g} >= 1"
        )
    e_c = inv_binary_entropy(h_ab + d_i)
    e_rec = inv_binary_entropy(h_ab + headroom * d_i)
    if e_rec <= e_ab:
        raise InfeasibleError("no_threshold_gap", "e_rec does not exceed ber")
    q_squared = gaussian_tail_inverse(beta_fail) ** 2
    if e_ab == 0.0:
        m_exact, m_lin = 1.0, 1
    else:
        variance = e_ab * (1.0 - e_ab)
        m_exact = variance / (e_rec - e_ab) ** 2 * q_squared
        slope = math.log2((1.0 - e_ab) / e_ab)
        m_lin = max(1, math.ceil(variance * slope**2 / d_i**2 * q_squared))
    return BlockBound(
        ber=e_ab,
        secret_per_digit=d_i,
        e_c=e_c,
        e_rec=e_rec,
        headroom=headroom,
        beta_fail=beta_fail,
        q_squared=q_squared,
        m_exact=m_exact,
        m_min=max(1, math.ceil(m_exact)),
        m_linearized=m_lin,
        net_secret_per_digit=(1.0 - headroom) * d_i,
    )


def pipeline_block_size(
    point: ChannelPoint,
    beta_fail: float = DEFAULT_BETA_FAIL,
    headroom: float = DEFAULT_HEADROOM,
    fractional: bool = True,
) -> float:
    """Unrounded minimum block length for a channel point."""
    plan = plan_quantization(propagate(point), fractional=fractional)
    return block_size_bound(plan, beta_fail, headroom).m_exact


def relative_complexity(
    a: ChannelPoint,
    b: ChannelPoint,
    mode: ScalingMode | str = ScalingMode.POWER_LAW_ETA4,
    beta_fail: float = DEFAULT_BETA_FAIL,
    headroom: float = DEFAULT_HEADROOM,
) -> float:
    """How many times more expensive decoding at ``b`` is than at ``a``.

    Decoding cost is taken as O(m^2).  ``power_law_eta4`` assumes the per-digit
    secret rate is proportional to the transmission, giving
    ``(eta_a / eta_b)**4``; ``full_pipeline`` squares the ratio of the actual
    unrounded block sizes from fractional-digit plans.
    """
    mode = ScalingMode(mode)
    if mode is ScalingMode.POWER_LAW_ETA4:
        return (a.transmission / b.transmission) ** 4
    m_a = pipeline_block_size(a, beta_fail, headroom)
    m_b = pipeline_block_size(b, beta_fail, headroom)
    return (m_b / m_a) ** 2


def complexity_estimate(
    point: ChannelPoint,
    bound: BlockBound,
    mode: ScalingMode | str = ScalingMode.FULL_PIPELINE,
    reference_transmission: float = REFERENCE_TRANSMISSION,
) -> ComplexityEstimate:
    reference = ChannelPoint(reference_transmission, point.mod_variance)
    rel = relative_complexity(reference, point, mode, bound.beta_fail, bound.headroom)
    return ComplexityEstimate(bound.m_min, rel, ScalingMode(mode), reference_transmission)


def audit_worked_example(
    info: InfoBudget,
    plan: DigitPlan,
    secret_per_element: Optional[float] = None,
) -> AuditReport:
    """Bit accounting for distilling a single secret bit.

    ``secret_per_element`` overrides ``info.delta_i`` when a rounded, quoted
    key rate should drive the element count.  The leak floor is rounded half
    to even.
    """
    rate = info.delta_i if secret_per_element is None else float(secret_per_element)
    if not (rate > 0.0):
        raise InfeasibleError("no_secret_rate", f"secret rate {rate:.6g} <= 0")
    elements = math.ceil(1.0 / rate - 1e-9)
    d = plan.digits_per_element
    digits_total = elements * d
    leak_min = round(elements * (d - info.i_ab))
    if leak_min < 0:
        raise InfeasibleError("insufficient_digits", "i_ab exceeds digits per element")
    eve_budget = leak_min + 1
    total = digits_total + leak_min
    efficiency = eve_budget / leak_min if leak_min > 0 else None
    gap_db = 10.0 * math.log10((digits_total + eve_budget) / total)
    return AuditReport(
        secret_per_element=rate,
        digits_per_element=d,
        elements_per_secret_bit=elements,
        digits_total=digits_total,
        leak_min_bits=leak_min,
        eve_budget_bits=eve_budget,
        total_digits_plus_leak=total,
        required_efficiency=efficiency,
        required_gap_db=gap_db,
    )
