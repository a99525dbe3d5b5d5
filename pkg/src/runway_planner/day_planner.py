"""Day-level flight slot transfers.

Flights that a slot cannot serve sustainably are pushed to the next slot.
Transfers ``s_i >= 0`` (fractional, interpreted as expected counts) turn the
schedule into ``lambda2_i = lambda_i + s_{i-1} - s_i`` with ``s_0 = s_N = 0``.
The transfer LP keeps every ``lambda2_i`` inside its slot's secondary demand
domain at minimal ``c_a * sum(s_a) + c_d * sum(s_d)``; each slot's service
policy is then chosen by the slot optimizer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import lp
from .domains import (
    DemandDomain,
    SlotContext,
    congestion_rates,
    secondary_demand_domain,
    sustainable_exists,
)
from .envelope import CapacityEnvelope, psi
from .errors import InfeasibleSchedule, InvalidInput, NoSustainablePolicy, NotAVertex
from .queueing import stable_transit_time
from .slot_optimizer import DelayCosts, SlotPolicy, delay_cost, optimize_slot

VERTEX_TOL = 1e-9
# congestion-rate gap below which the sustainable domain is a single point
DEGENERATE_TOL = 1e-7
CHORD_TOL = 1e-7


@dataclass(frozen=True)
class RunwayConfiguration:
    envelope: CapacityEnvelope
    q_a: float
    q_d: float

    def __post_init__(self):
        if not (self.q_a > 0 and self.q_d > 0):
            raise InvalidInput(f"variability coefficients must be positive, got ({self.q_a}, {self.q_d})")


@dataclass(frozen=True)
class SlotDemand:
    lambda_a: float
    lambda_d: float
    config_id: str

    def __post_init__(self):
        if not (self.lambda_a >= 0 and self.lambda_d >= 0):
            raise InvalidInput(f"demand must be nonnegative, got ({self.lambda_a}, {self.lambda_d})")


@dataclass(frozen=True)
class DaySchedule:
    slots: tuple[SlotDemand, ...]
    p_a: float
    p_d: float

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        object.__setattr__(self, "p_a", float(self.p_a))
        object.__setattr__(self, "p_d", float(self.p_d))
        if len(self.slots) < 1:
            raise InvalidInput("a day schedule needs at least one slot")
        if not (self.p_a > 0 and self.p_d > 0):
            raise InvalidInput(f"delay tolerances must be positive, got ({self.p_a}, {self.p_d})")

    @property
    def n_slots(self) -> int:
        return len(self.slots)

    def demand(self) -> np.ndarray:
        return np.array([[s.lambda_a, s.lambda_d] for s in self.slots], dtype=float)


@dataclass(frozen=True)
class TransferPlan:
    s_a: np.ndarray
    s_d: np.ndarray
    lambda2_a: np.ndarray
    lambda2_d: np.ndarray
    total_cost: float

    def rounded(self) -> tuple[np.ndarray, np.ndarray]:
        """Nearest-integer transfers, for reporting only."""
        return np.rint(self.s_a), np.rint(self.s_d)


@dataclass(frozen=True)
class DayPlan:
    transfers: TransferPlan
    policies: tuple[SlotPolicy, ...]
    total_delay_cost: float
    total_transfer_cost: float
    vertex_slots: tuple[int, ...] = field(default=())
    # slots served by an edge interpolation whose transit times exceed tolerance
    chord_slots: tuple[int, ...] = field(default=())


def demand_domains(
    day: DaySchedule, configs: Mapping[str, RunwayConfiguration]
) -> list[DemandDomain]:
    """Secondary domain per slot, computed once per configuration."""
    cache: dict[str, DemandDomain] = {}
    out = []
    for i, slot in enumerate(day.slots):
        if slot.config_id not in configs:
            raise InvalidInput(f"slot {i} uses unknown configuration {slot.config_id!r}")
        if slot.config_id not in cache:
            cfg = configs[slot.config_id]
            cache[slot.config_id] = secondary_demand_domain(
                cfg.envelope, cfg.q_a, cfg.q_d, day.p_a, day.p_d
            )
        out.append(cache[slot.config_id])
    return out


def build_transfer_lp(
    day: DaySchedule,
    configs: Mapping[str, RunwayConfiguration],
    costs: DelayCosts,
    domains: Sequence[DemandDomain] | None = None,
) -> lp.LinearProgram:
    """Transfer LP over ``s_a[0..N-2]`` followed by ``s_d[0..N-2]``.

    Slot ``i`` (0-based) contributes one row per demand-domain segment and
    two nonnegativity rows for ``lambda2_i``.
    """
    if domains is None:
        domains = demand_domains(day, configs)
    n = day.n_slots
    k = n - 1
    rows, rhs = [], []

    def coeffs(i):
        # lambda2_i = lambda_i + (coefficient row) . s
        ca, cd = np.zeros(2 * k), np.zeros(2 * k)
        if i >= 1:
            ca[i - 1] = 1.0
            cd[k + i - 1] = 1.0
        if i < k:
            ca[i] = -1.0
            cd[k + i] = -1.0
        return ca, cd

    for i, (slot, dom) in enumerate(zip(day.slots, domains)):
        ca, cd = coeffs(i)
        for hp in dom.half_planes():
            rows.append(hp.a_coeff * ca + hp.d_coeff * cd)
            rhs.append(hp.rhs - hp.a_coeff * slot.lambda_a - hp.d_coeff * slot.lambda_d)
        rows.append(-ca)
        rhs.append(slot.lambda_a)
        rows.append(-cd)
        rhs.append(slot.lambda_d)

    c = np.concatenate([np.full(k, costs.c_a), np.full(k, costs.c_d)])
    labels = tuple(f"s_a[{i}]" for i in range(k)) + tuple(f"s_d[{i}]" for i in range(k))
    A = np.array(rows).reshape(len(rows), 2 * k)
    return lp.LinearProgram(c, A, np.array(rhs), labels)


def vertex_slot_policy(
    ctx: SlotContext,
    costs: DelayCosts | None = None,
    domain: DemandDomain | None = None,
) -> SlotPolicy:
    """The single policy serving a demand-domain vertex at the tolerances."""
    if domain is None:
        domain = secondary_demand_domain(ctx.envelope, ctx.q_a, ctx.q_d, ctx.p_a, ctx.p_d)
    j = domain.vertex_index(ctx.lambda_a, ctx.lambda_d, VERTEX_TOL)
    if j is None:
        raise NotAVertex(f"({ctx.lambda_a}, {ctx.lambda_d}) is not a demand-domain vertex")
    mu = domain.service_points[j]
    cost = delay_cost(ctx, costs, ctx.p_a, ctx.p_d) if costs is not None else float("nan")
    return SlotPolicy(ctx.p_a, ctx.p_d, mu.x, mu.y, cost)


def _boundary_policy(ctx: SlotContext, costs: DelayCosts) -> SlotPolicy | None:
    """Congestion-rate policy for demand on the exact domain boundary.

    Returns None when that point is outside the envelope.
    """
    mu_a, mu_d = congestion_rates(ctx)
    env = ctx.envelope
    if mu_d > env.mu_d_max + DEGENERATE_TOL or mu_a > psi(env, min(mu_d, env.mu_d_max)) + DEGENERATE_TOL:
        return None
    return SlotPolicy(ctx.p_a, ctx.p_d, mu_a, mu_d, delay_cost(ctx, costs, ctx.p_a, ctx.p_d))


def chord_policy(ctx: SlotContext, costs: DelayCosts, domain: DemandDomain) -> SlotPolicy:
    """Policy for demand on a straight demand-domain edge.

    The edge between two vertices is served by the same interpolation of
    their service points. When the congestion rate is concave in demand
    (variability above 2) this policy may exceed the tolerances slightly.
    """
    lam = np.array([ctx.lambda_a, ctx.lambda_d])
    best = None
    for j, (v0, v1) in enumerate(zip(domain.vertices[:-1], domain.vertices[1:])):
        v0, v1 = np.asarray(v0), np.asarray(v1)
        edge = v1 - v0
        t = float(np.clip((lam - v0) @ edge / (edge @ edge), 0.0, 1.0))
        dist = float(np.linalg.norm(v0 + t * edge - lam))
        if best is None or dist < best[0]:
            best = (dist, j, t)
    dist, j, t = best
    if dist > CHORD_TOL * max(1.0, float(np.abs(lam).max())):
        raise NoSustainablePolicy(
            f"demand ({ctx.lambda_a}, {ctx.lambda_d}) admits no sustainable policy"
        )
    s0, s1 = domain.service_points[j], domain.service_points[j + 1]
    mu_a = (1 - t) * s0.x + t * s1.x
    mu_d = (1 - t) * s0.y + t * s1.y
    z_a = stable_transit_time(ctx.lambda_a, mu_a, ctx.q_a)
    z_d = stable_transit_time(ctx.lambda_d, mu_d, ctx.q_d)
    return SlotPolicy(z_a, z_d, mu_a, mu_d, delay_cost(ctx, costs, z_a, z_d))


def slot_policy(
    ctx: SlotContext, costs: DelayCosts, domain: DemandDomain | None = None
) -> tuple[SlotPolicy, str]:
    """Best policy for a slot whose demand lies in its secondary domain.

    The second item says how it was found: ``"vertex"``, ``"optimal"``,
    ``"boundary"`` or ``"chord"`` (transit times may exceed tolerance).
    """
    if domain is None:
        domain = secondary_demand_domain(ctx.envelope, ctx.q_a, ctx.q_d, ctx.p_a, ctx.p_d)
    try:
        return vertex_slot_policy(ctx, costs, domain), "vertex"
    except NotAVertex:
        pass
    if sustainable_exists(ctx):
        return optimize_slot(ctx, costs), "optimal"
    policy = _boundary_policy(ctx, costs)
    if policy is not None:
        return policy, "boundary"
    return chord_policy(ctx, costs, domain), "chord"


def plan_day(
    day: DaySchedule,
    configs: Mapping[str, RunwayConfiguration],
    costs: DelayCosts,
    slot_costs: DelayCosts | None = None,
) -> DayPlan:
    """Minimal-cost transfers, then the best policy in every slot.

    ``slot_costs`` prices transit-time delay inside slots and defaults to
    ``costs``.
    """
    slot_costs = slot_costs or costs
    domains = demand_domains(day, configs)
    program = build_transfer_lp(day, configs, costs, domains)
    sol = lp.solve(program)
    if not sol.is_optimal:
        raise InfeasibleSchedule(
            f"no transfer plan makes the schedule sustainable (LP {sol.status.value})"
        )

    n = day.n_slots
    k = n - 1
    s_a = np.zeros(n)
    s_d = np.zeros(n)
    s_a[:k] = sol.x[:k]
    s_d[:k] = sol.x[k:]
    demand = day.demand()
    prev_a = np.concatenate([[0.0], s_a[:-1]])
    prev_d = np.concatenate([[0.0], s_d[:-1]])
    lam2_a = np.maximum(demand[:, 0] + prev_a - s_a, 0.0)
    lam2_d = np.maximum(demand[:, 1] + prev_d - s_d, 0.0)
    transfers = TransferPlan(s_a, s_d, lam2_a, lam2_d, sol.objective_value)

    policies = []
    vertex_slots = []
    chord_slots = []
    for i, (slot, dom) in enumerate(zip(day.slots, domains)):
        cfg = configs[slot.config_id]
        ctx = SlotContext(cfg.envelope, cfg.q_a, cfg.q_d, day.p_a, day.p_d, float(lam2_a[i]), float(lam2_d[i]))
        policy, kind = slot_policy(ctx, slot_costs, dom)
        policies.append(policy)
        if kind == "vertex":
            vertex_slots.append(i)
        elif kind == "chord":
            chord_slots.append(i)

    total_delay = math.fsum(p.expected_cost for p in policies)
    return DayPlan(
        transfers,
        tuple(policies),
        total_delay,
        sol.objective_value,
        tuple(vertex_slots),
        tuple(chord_slots),
    )
