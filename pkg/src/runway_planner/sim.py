"""FIFO single-server queue simulation, used to check the Kingman formulas.

Interarrival and service times are gamma distributed with the requested mean
and quadratic ratio of momenta ``q = E(X^2)/E(X)^2 = 1 + 1/shape``; ``q = 1``
gives constant times. Waiting times follow the Lindley recursion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, InvalidVariability, UnstableSystem
from .queueing import stable_transit_time

DEFAULT_SEED = 20240611
DEFAULT_WARMUP_FRACTION = 0.1


@dataclass(frozen=True)
class ArrivalServiceModel:
    """Means in slots; ``mean_interarrival = inf`` disables arrivals."""

    mean_interarrival: float
    mean_service: float
    q_c: float
    q_s: float

    def __post_init__(self):
        if not (self.mean_interarrival > 0 and self.mean_service > 0):
            raise InvalidInput("mean interarrival and service times must be positive")
        if not math.isfinite(self.mean_service):
            raise InvalidInput("mean service time must be finite")
        if self.q_c < 1 or self.q_s < 1:
            raise InvalidVariability(
                f"quadratic ratios of momenta must be >= 1, got q_C={self.q_c}, q_S={self.q_s}"
            )

    @classmethod
    def from_rates(cls, lam: float, mu: float, q_c: float, q_s: float) -> "ArrivalServiceModel":
        if lam < 0 or not mu > 0:
            raise InvalidInput(f"need lam >= 0 and mu > 0 (got {lam}, {mu})")
        return cls(math.inf if lam == 0 else 1.0 / lam, 1.0 / mu, q_c, q_s)

    @property
    def lam(self) -> float:
        return 1.0 / self.mean_interarrival

    @property
    def mu(self) -> float:
        return 1.0 / self.mean_service

    @property
    def q(self) -> float:
        return self.q_s + self.q_c - 2.0


@dataclass(frozen=True)
class SimResult:
    mean_transit_time: float
    mean_queue_length: float
    mean_waiting_time: float
    arrivals_served: int
    seed: int


@dataclass(frozen=True)
class KingmanComparison:
    simulated_z: float
    formula_z: float
    relative_gap: float
    result: SimResult


def sample_times(rng: np.random.Generator, mean: float, q: float, size: int) -> np.ndarray:
    """Positive samples with the given mean and quadratic ratio of momenta."""
    if q < 1:
        raise InvalidVariability(f"quadratic ratio of momenta must be >= 1, got {q}")
    if q == 1:
        return np.full(size, mean)
    shape = 1.0 / (q - 1.0)
    return rng.gamma(shape, mean / shape, size)


def _warmup_count(n_arrivals: int, warmup: int | float | None) -> int:
    if warmup is None:
        warmup = DEFAULT_WARMUP_FRACTION
    if isinstance(warmup, float):
        if not 0 <= warmup < 1:
            raise InvalidInput(f"warmup fraction must be in [0, 1), got {warmup}")
        return int(n_arrivals * warmup)
    if not 0 <= warmup < n_arrivals:
        raise InvalidInput(f"warmup must be in [0, {n_arrivals}), got {warmup}")
    return int(warmup)


def simulate_queue(
    model: ArrivalServiceModel,
    n_arrivals: int,
    warmup: int | float | None = None,
    seed: int = DEFAULT_SEED,
) -> SimResult:
    """Simulate ``n_arrivals`` clients and average over the post-warmup ones.

    ``warmup`` is a number of clients (int) or a fraction of ``n_arrivals``
    (float, default 0.1).
    """
    if n_arrivals < 1:
        raise InvalidInput(f"n_arrivals must be >= 1, got {n_arrivals}")
    if model.mean_interarrival <= model.mean_service:
        raise UnstableSystem(
            f"arrival rate {model.lam} is not below service rate {model.mu}"
        )
    skip = _warmup_count(n_arrivals, warmup)

    if math.isinf(model.mean_interarrival):
        # every client finds an empty server
        return SimResult(model.mean_service, 0.0, 0.0, n_arrivals, seed)

    rng = np.random.default_rng(seed)
    gaps = sample_times(rng, model.mean_interarrival, model.q_c, n_arrivals)
    services = sample_times(rng, model.mean_service, model.q_s, n_arrivals)

    waits = [0.0] * n_arrivals
    w = 0.0
    for k, (s, c) in enumerate(zip(services.tolist(), gaps.tolist())):
        waits[k] = w
        w = w + s - c
        if w < 0.0:
            w = 0.0

    kept_waits = np.asarray(waits[skip:])
    kept_services = services[skip:]
    mean_wait = float(kept_waits.mean())
    mean_service = model.mean_service if model.q_s == 1 else float(kept_services.mean())
    horizon = float(gaps[skip:].sum())
    mean_queue = float(kept_waits.sum()) / horizon
    return SimResult(mean_wait + mean_service, mean_queue, mean_wait, n_arrivals, seed)


def compare_to_kingman(
    model: ArrivalServiceModel,
    n_arrivals: int,
    warmup: int | float | None = None,
    seed: int = DEFAULT_SEED,
) -> KingmanComparison:
    result = simulate_queue(model, n_arrivals, warmup, seed)
    lam = 0.0 if math.isinf(model.mean_interarrival) else model.lam
    formula = stable_transit_time(lam, model.mu, model.q)
    gap = abs(result.mean_transit_time - formula) / formula
    return KingmanComparison(result.mean_transit_time, formula, gap, result)
