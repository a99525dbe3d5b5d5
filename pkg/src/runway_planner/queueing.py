"""Stable single-queue algebra based on Kingman's heavy-traffic estimate.

All rates are per slot and all times are in slots. ``q`` is the combined
variability coefficient ``q_S + q_C - 2`` of service and interarrival times.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidInput, SaturatedQueue

BOUNDARY_TOL = 1e-12


class Regime(enum.Enum):
    SATURATION = "saturation"
    CONGESTION = "congestion"
    SUSTAINABLE = "sustainable"


@dataclass(frozen=True)
class QueueParams:
    lam: float
    mu: float
    q: float

    def __post_init__(self):
        if not self.mu > 0:
            raise InvalidInput(f"service rate must be positive, got {self.mu}")
        if not self.lam >= 0:
            raise InvalidInput(f"demand rate must be nonnegative, got {self.lam}")
        if not self.q >= 0:
            raise InvalidInput(f"variability coefficient must be nonnegative, got {self.q}")

    @property
    def rho(self) -> float:
        return self.lam / self.mu

    @property
    def transit_time(self) -> float:
        return stable_transit_time(self.lam, self.mu, self.q)


@dataclass(frozen=True)
class DelayTolerance:
    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise InvalidInput(f"delay tolerance must be positive, got {self.p}")


def _check_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise InvalidInput(f"{name} must be finite, got {value}")


def stable_transit_time(lam: float, mu: float, q: float) -> float:
    """Expected waiting-plus-service time of a client in the stationary queue."""
    _check_finite(lam=lam, mu=mu, q=q)
    if mu <= 0 or lam < 0 or q < 0:
        raise InvalidInput(f"need mu > 0, lam >= 0, q >= 0 (got {lam}, {mu}, {q})")
    if mu <= lam:
        raise SaturatedQueue(f"service rate {mu} does not exceed demand rate {lam}")
    return (1.0 + q * lam / (2.0 * (mu - lam))) / mu


def service_rate_for_transit(lam: float, z: float, q: float) -> float:
    """Service rate that yields stable transit time ``z`` under demand ``lam``.

    This is the larger root of the quadratic obtained from the transit-time
    formula; the discriminant is at least ``(1 - lam*z)**2`` for ``q > 0``.
    """
    _check_finite(lam=lam, z=z, q=q)
    if not z > 0:
        raise InvalidInput(f"transit time must be positive, got {z}")
    if lam < 0 or not q > 0:
        raise InvalidInput(f"need lam >= 0 and q > 0 (got {lam}, {q})")
    lz = lam * z
    disc = 1.0 + lz * lz + 2.0 * lz * (q - 1.0)
    return (1.0 + lz + math.sqrt(disc)) / (2.0 * z)


def demand_rate_for_transit(mu: float, z: float, q: float) -> float:
    """Demand rate at which service rate ``mu`` yields transit time ``z``."""
    _check_finite(mu=mu, z=z, q=q)
    if not mu > 0 or not q > 0:
        raise InvalidInput(f"need mu > 0 and q > 0 (got {mu}, {q})")
    excess = z * mu - 1.0
    if excess < -BOUNDARY_TOL:
        raise InvalidInput(
            f"transit time {z} is below the pure service time {1.0 / mu}"
        )
    excess = max(excess, 0.0)
    return mu * 2.0 * excess / (q + 2.0 * excess)


def expected_queue_length(lam: float, mu: float, q_s: float, q_c: float) -> float:
    """Long-run expected number of waiting clients (Kingman estimate)."""
    _check_finite(lam=lam, mu=mu, q_s=q_s, q_c=q_c)
    if mu <= 0 or lam < 0:
        raise InvalidInput(f"need mu > 0 and lam >= 0 (got {lam}, {mu})")
    if q_s < 1 or q_c < 1:
        raise InvalidInput(f"quadratic ratios must be >= 1 (got {q_s}, {q_c})")
    if mu <= lam:
        raise SaturatedQueue(f"service rate {mu} does not exceed demand rate {lam}")
    return lam * lam / (mu * (mu - lam)) * (q_s + q_c - 2.0) / 2.0


def congestion_service_rate(lam: float, p: float, q: float) -> float:
    """Minimal service rate keeping the transit time within tolerance ``p``."""
    if not p > 0:
        raise InvalidInput(f"delay tolerance must be positive, got {p}")
    return service_rate_for_transit(lam, p, q)


def congestion_demand_rate(mu: float, p: float, q: float) -> float:
    """Largest demand rate that service rate ``mu`` serves within tolerance ``p``.

    Inverse of :func:`congestion_service_rate`, defined for ``mu >= 1/p``.
    """
    if not p > 0:
        raise InvalidInput(f"delay tolerance must be positive, got {p}")
    return demand_rate_for_transit(mu, p, q)


def classify_regime(lam: float, mu: float, q: float, p: float) -> Regime:
    if not mu > 0 or not p > 0:
        raise InvalidInput(f"need mu > 0 and p > 0 (got {mu}, {p})")
    if lam >= mu:
        return Regime.SATURATION
    if stable_transit_time(lam, mu, q) > p + BOUNDARY_TOL:
        return Regime.CONGESTION
    return Regime.SUSTAINABLE
