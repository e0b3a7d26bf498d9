"""Distance sweeps and the exponential fit of decoding cost versus length."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Optional, Sequence

import numpy as np

from .budget import (
    DEFAULT_BETA_FAIL,
    DEFAULT_HEADROOM,
    ScalingMode,
    block_size_bound,
    plan_quantization,
)
from .channel import DEFAULT_ATTENUATION_DB_PER_KM, ChannelPoint, propagate
from .errors import DomainError, InfeasibleError

SWEEP_COLUMNS = (
    "distance_km",
    "transmission",
    "i_ab",
    "i_be",
    "delta_i",
    "fractional_digits",
    "digits",
    "ber",
    "secret_per_digit",
    "m_min",
    "relative_complexity",
)
CSV_COLUMNS = SWEEP_COLUMNS + ("feasible", "reason")


@dataclass(frozen=True)
class SweepRow:
    distance_km: float
    transmission: float
    i_ab: float
    i_be: float
    delta_i: float
    fractional_digits: Optional[float] = None
    digits: Optional[int] = None
    ber: Optional[float] = None
    secret_per_digit: Optional[float] = None
    m_min: Optional[int] = None
    relative_complexity: Optional[float] = None
    feasible: bool = True
    reason: Optional[str] = None
    # unrounded block length, used for full-pipeline ratios; not serialized
    m_exact: Optional[float] = None

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("m_exact")
        return d

    def as_csv_row(self) -> list[Any]:
        d = self.to_dict()
        return [d[c] for c in CSV_COLUMNS]


@dataclass(frozen=True)
class FitResult:
    slope_per_km: float
    intercept: float
    r_squared: float
    mode: ScalingMode
    points: int

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["mode"] = ScalingMode(self.mode).value
        return d


def sweep_distances(start: float, end: float, step: float) -> list[float]:
    if not (math.isfinite(start) and math.isfinite(end) and start >= 0.0):
        raise DomainError("distances must be finite and >= 0")
    if end < start:
        raise DomainError("sweep end must not precede start")
    if not (step > 0.0):
        raise DomainError("step must be > 0")
    n = math.floor((end - start) / step + 1e-9)
    return [start + i * step for i in range(n + 1)]


def _row(point: ChannelPoint, mode: ScalingMode, beta_fail: float, headroom: float) -> SweepRow:
    info = propagate(point)
    base = dict(
        distance_km=point.distance_km,
        transmission=point.transmission,
        i_ab=info.i_ab,
        i_be=info.i_be,
        delta_i=info.delta_i,
    )
    try:
        plan = plan_quantization(info, fractional=mode is ScalingMode.FULL_PIPELINE)
        bound = block_size_bound(plan, beta_fail, headroom)
    except InfeasibleError as exc:
        return SweepRow(**base, feasible=False, reason=exc.reason)
    return SweepRow(
        **base,
        fractional_digits=plan.fractional_digits,
        digits=plan.digits_per_element,
        ber=plan.ber,
        secret_per_digit=plan.secret_per_digit,
        m_min=bound.m_min,
        m_exact=bound.m_exact,
    )


def run_sweep(
    start: float,
    end: float,
    step: float,
    mod_variance: float = 100.0,
    beta_fail: float = DEFAULT_BETA_FAIL,
    headroom: float = DEFAULT_HEADROOM,
    mode: ScalingMode | str = ScalingMode.POWER_LAW_ETA4,
    attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM,
) -> list[SweepRow]:
    """One row per distance, complexity relative to the first feasible row.

    Infeasible rows stay in the table with ``feasible=False`` and no
    complexity value.
    """
    mode = ScalingMode(mode)
    rows = [
        _row(ChannelPoint.from_distance(L, mod_variance, attenuation_db_per_km), mode, beta_fail, headroom)
        for L in sweep_distances(start, end, step)
    ]
    ref = next((r for r in rows if r.feasible), None)
    if ref is None:
        return rows
    out = []
    for r in rows:
        if not r.feasible:
            out.append(r)
            continue
        if mode is ScalingMode.POWER_LAW_ETA4:
            rel = (ref.transmission / r.transmission) ** 4
        else:
            rel = (r.m_exact / ref.m_exact) ** 2
        out.append(_replace(r, relative_complexity=rel))
    return out


def _replace(row: SweepRow, **changes) -> SweepRow:
    d = asdict(row)
    d.update(changes)
    return SweepRow(**d)


def fit_log_linear(rows: Sequence[SweepRow], mode: ScalingMode | str) -> FitResult:
    """Least-squares line through ``(L, ln relative_complexity)`` of feasible rows."""
    pts = [(r.distance_km, math.log(r.relative_complexity)) for r in rows if r.feasible]
    if len(pts) < 2:
        raise InfeasibleError("too_few_feasible_rows", f"{len(pts)} feasible row(s), need 2")
    x, y = np.array(pts).T
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0.0 else 1.0
    return FitResult(float(slope), float(intercept), min(1.0, max(0.0, r2)), ScalingMode(mode), len(pts))
