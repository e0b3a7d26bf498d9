"""Losses-only Gaussian channel with a beamsplitter eavesdropper.

Variances are in shot-noise units (N0 = 1).  Alice sends a coherent state
whose quadrature carries a Gaussian modulation of variance ``V``, so her
field has total variance ``V + 1``.  A beamsplitter of transmission ``eta``
sends one port to Bob and the other to Eve, who measures it by homodyne
detection.  There is no excess noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import DomainError

DEFAULT_ATTENUATION_DB_PER_KM = 0.2


def transmission_from_distance(
    distance_km: float, attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM
) -> float:
    """Fiber power transmittance ``10 ** (-attenuation * distance / 10)``."""
    distance_km = float(distance_km)
    attenuation_db_per_km = float(attenuation_db_per_km)
    if not math.isfinite(distance_km) or distance_km < 0.0:
        raise DomainError(f"distance must be finite and >= 0, got {distance_km!r}")
    if not math.isfinite(attenuation_db_per_km) or attenuation_db_per_km <= 0.0:
        raise DomainError(f"attenuation must be > 0, got {attenuation_db_per_km!r}")
    return 10.0 ** (-attenuation_db_per_km * distance_km / 10.0)


@dataclass(frozen=True)
class ChannelPoint:
    transmission: float
    mod_variance: float
    distance_km: Optional[float] = None
    attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM

    def __post_init__(self):
        self.check()

    def check(self, tol: float = 1e-12) -> None:
        eta, v = self.transmission, self.mod_variance
        if not (math.isfinite(eta) and 0.0 < eta <= 1.0):
            raise DomainError(f"transmission must lie in (0, 1], got {eta!r}")
        if not (math.isfinite(v) and v >= 0.0):
            raise DomainError(f"modulation variance must be >= 0, got {v!r}")
        if not (self.attenuation_db_per_km > 0.0):
            raise DomainError("attenuation must be > 0")
        if self.distance_km is not None:
            expected = transmission_from_distance(self.distance_km, self.attenuation_db_per_km)
            if abs(expected - eta) > tol * max(1.0, expected):
                raise DomainError(
                    f"transmission {eta!r} inconsistent with {self.distance_km} km "
                    f"at {self.attenuation_db_per_km} dB/km"
                )

    @classmethod
    def from_distance(
        cls,
        distance_km: float,
        mod_variance: float,
        attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM,
    ) -> "ChannelPoint":
        eta = transmission_from_distance(distance_km, attenuation_db_per_km)
        return cls(eta, float(mod_variance), float(distance_km), float(attenuation_db_per_km))

    @property
    def loss_db(self) -> float:
        return -10.0 * math.log10(self.transmission)

    def to_dict(self) -> dict[str, Any]:
        return {
            "transmission": self.transmission,
            "mod_variance": self.mod_variance,
            "distance_km": self.distance_km,
            "attenuation_db_per_km": self.attenuation_db_per_km,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any], tol: float = 1e-12) -> "ChannelPoint":
        obj = object.__new__(cls)
        for key in ("transmission", "mod_variance", "distance_km", "attenuation_db_per_km"):
            object.__setattr__(obj, key, d[key])
        obj.check(tol)
        return obj


@dataclass(frozen=True)
class InfoBudget:
    """Per-element mutual information ledger seen from Bob's data.

    ``v_b_given_a`` and ``v_b_given_e`` are the conditional variances of Bob's
    quadrature given Alice's and Eve's data.  Information rates are in bits
    per key element.
    """

    v_b: float
    v_b_given_a: float
    v_b_given_e: float
    i_ab: float
    i_be: float
    delta_i: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "delta_i", self.i_ab - self.i_be)
        self.check()

    def check(self, tol: float = 1e-12) -> None:
        if not (self.v_b_given_a > 0.0):
            raise DomainError("v_b_given_a must be > 0")
        if not (self.v_b + tol >= self.v_b_given_e >= self.v_b_given_a - tol):
            raise DomainError("need v_b >= v_b_given_e >= v_b_given_a")
        if not (self.i_ab + tol >= self.i_be >= -tol):
            raise DomainError("need i_ab >= i_be >= 0")
        if abs(self.delta_i - (self.i_ab - self.i_be)) > tol:
            raise DomainError("delta_i must equal i_ab - i_be")

    @property
    def noise_gap(self) -> float:
        """Eve's excess uncertainty about Bob over Alice's, in N0."""
        return self.v_b_given_e - self.v_b_given_a

    @classmethod
    def from_variances(cls, v_b: float, v_b_given_a: float, v_b_given_e: float) -> "InfoBudget":
        if not (v_b_given_a > 0.0 and v_b_given_e > 0.0 and v_b > 0.0):
            raise DomainError("variances must be positive")
        i_ab = 0.5 * math.log2(v_b / v_b_given_a)
        i_be = 0.5 * math.log2(v_b / v_b_given_e)
        return cls(v_b, v_b_given_a, v_b_given_e, i_ab, i_be)

    def to_dict(self) -> dict[str, Any]:
        return {
            "v_b": self.v_b,
            "v_b_given_a": self.v_b_given_a,
            "v_b_given_e": self.v_b_given_e,
            "i_ab": self.i_ab,
            "i_be": self.i_be,
            "delta_i": self.delta_i,
            "noise_gap": self.noise_gap,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any], tol: float = 1e-12) -> "InfoBudget":
        obj = object.__new__(cls)
        for key in ("v_b", "v_b_given_a", "v_b_given_e", "i_ab", "i_be", "delta_i"):
            object.__setattr__(obj, key, d[key])
        obj.check(tol)
        return obj


def propagate(point: ChannelPoint) -> InfoBudget:
    """Information budget of the beamsplitter attack at ``point``.

    Bob receives variance ``eta*V + 1``; Eve's port carries
    ``(1-eta)(V+1) + eta`` and shares covariance ``sqrt(eta(1-eta)) * V``
    with Bob.  Eve's conditional variance on Bob follows from the usual
    Gaussian conditioning ``v_b - C**2 / V_E``.
    """
    if not isinstance(point, ChannelPoint):
        raise DomainError("propagate expects a ChannelPoint")
    eta, v = point.transmission, point.mod_variance
    v_b = eta * v + 1.0
    v_eve = (1.0 - eta) * (v + 1.0) + eta
    cov_sq = eta * (1.0 - eta) * v * v
    v_b_given_e = v_b - cov_sq / v_eve
    return InfoBudget.from_variances(v_b, 1.0, v_b_given_e)
