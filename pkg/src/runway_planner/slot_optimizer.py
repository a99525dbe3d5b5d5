"""Per-slot service policy minimizing expected delay cost.

The cost ``c_a*lambda_a*z_a + c_d*lambda_d*z_d`` is linear in transit times,
so the problem is solved in delay space where the sustainable region is the
polygon above the transformed control points. Its optimum is attained at
one of those vertices; :func:`cross_check_lp` solves the same linearized
program with the simplex solver instead of enumerating.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import lp
from .domains import (
    DelayPolicyDomain,
    SlotContext,
    congestion_rates,
    delay_policy_domain,
    sustainable_exists,
)
from .envelope import half_planes
from .errors import DegenerateObjective, InvalidInput, NoSustainablePolicy
from .queueing import service_rate_for_transit


@dataclass(frozen=True)
class DelayCosts:
    c_a: float
    c_d: float

    def __post_init__(self):
        if not (self.c_a > 0 and self.c_d > 0):
            raise InvalidInput(f"delay costs must be positive, got ({self.c_a}, {self.c_d})")


@dataclass(frozen=True)
class SlotPolicy:
    z_a: float
    z_d: float
    mu_a: float
    mu_d: float
    expected_cost: float


def delay_cost(ctx: SlotContext, costs: DelayCosts, z_a: float, z_d: float) -> float:
    return costs.c_a * ctx.lambda_a * z_a + costs.c_d * ctx.lambda_d * z_d


def objective_weights(ctx: SlotContext, costs: DelayCosts) -> tuple[float, float]:
    """Per-unit-delay weights of the delay-space objective.

    With no demand at all the cost is identically zero; the per-flight
    costs are then used so that the least-delay vertex is still selected.
    """
    wa, wd = costs.c_a * ctx.lambda_a, costs.c_d * ctx.lambda_d
    if wa == 0.0 and wd == 0.0:
        warnings.warn(
            "zero demand in both services: delay cost is identically zero",
            DegenerateObjective,
            stacklevel=3,
        )
        return costs.c_a, costs.c_d
    return wa, wd


def _policy_from_delays(ctx: SlotContext, costs: DelayCosts, z_a: float, z_d: float) -> SlotPolicy:
    mu_a = service_rate_for_transit(ctx.lambda_a, z_a, ctx.q_a)
    mu_d = service_rate_for_transit(ctx.lambda_d, z_d, ctx.q_d)
    return SlotPolicy(z_a, z_d, mu_a, mu_d, delay_cost(ctx, costs, z_a, z_d))


def optimize_slot(
    ctx: SlotContext, costs: DelayCosts, domain: DelayPolicyDomain | None = None
) -> SlotPolicy:
    if domain is None:
        domain = delay_policy_domain(ctx)
    weights = objective_weights(ctx, costs)
    z_a, z_d = lp.enumerate_polygon_optimum(domain.vertices, weights)
    return _policy_from_delays(ctx, costs, z_a, z_d)


def delay_space_lp(ctx: SlotContext, costs: DelayCosts, domain: DelayPolicyDomain | None = None) -> lp.LinearProgram:
    """Linearized delay-space program over variables ``(z_a, z_d)``."""
    if domain is None:
        domain = delay_policy_domain(ctx)
    rows = [[hp.a_coeff, hp.d_coeff] for hp in domain.half_planes()]
    rhs = [hp.rhs for hp in domain.half_planes()]
    rows += [[1.0, 0.0], [0.0, 1.0]]
    rhs += [ctx.p_a, ctx.p_d]
    return lp.LinearProgram(
        np.array(objective_weights(ctx, costs)), np.array(rows), np.array(rhs), ("z_a", "z_d")
    )


def service_space_feasibility_lp(ctx: SlotContext) -> lp.LinearProgram:
    """Envelope constraints plus ``mu >= mu_cong``, with a zero objective."""
    mu_a_cong, mu_d_cong = congestion_rates(ctx)
    rows = [[hp.a_coeff, hp.d_coeff] for hp in half_planes(ctx.envelope)]
    rhs = [hp.rhs for hp in half_planes(ctx.envelope)]
    rows += [[-1.0, 0.0], [0.0, -1.0]]
    rhs += [-mu_a_cong, -mu_d_cong]
    return lp.LinearProgram(np.zeros(2), np.array(rows), np.array(rhs), ("mu_a", "mu_d"))


def cross_check_lp(ctx: SlotContext, costs: DelayCosts) -> SlotPolicy:
    if not sustainable_exists(ctx):
        sol = lp.solve(service_space_feasibility_lp(ctx))
        raise NoSustainablePolicy(
            f"no sustainable policy for demand ({ctx.lambda_a}, {ctx.lambda_d}); "
            f"service-space LP status: {sol.status.value}"
        )
    sol = lp.solve(delay_space_lp(ctx, costs))
    if not sol.is_optimal:
        raise NoSustainablePolicy(f"delay-space LP is {sol.status.value}")
    z_a, z_d = (float(v) for v in sol.x)
    return _policy_from_delays(ctx, costs, z_a, z_d)
