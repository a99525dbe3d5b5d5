"""Acceptance criteria, one test and one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from generators import random_context
from oracles import (
    ENV1,
    brute_force_lp,
    demand_segment,
    grid_transfer_cost_2slots,
    grid_transfer_cost_3slots_landing,
    inside_polygon,
    inside_triangle,
    random_envelope,
    random_slot_params,
)
from runway_planner.day_planner import DaySchedule, RunwayConfiguration, SlotDemand, plan_day
from runway_planner.domains import (
    SlotContext,
    congestion_rates,
    delay_policy_domain,
    secondary_demand_domain,
)
from runway_planner.envelope import contains, phi, psi, validate_envelope
from runway_planner.errors import InfeasibleSchedule
from runway_planner.lp import LinearProgram, LpStatus, solve
from runway_planner.queueing import (
    demand_rate_for_transit,
    expected_queue_length,
    service_rate_for_transit,
    stable_transit_time,
)
from runway_planner.sim import ArrivalServiceModel, compare_to_kingman
from runway_planner.slot_optimizer import DelayCosts, cross_check_lp, optimize_slot

SEED = 20240611


def test_inverse_round_trips(acceptance):
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        mu = rng.uniform(0.5, 50)
        lam = rng.uniform(0.05, 0.95) * mu
        q = rng.uniform(1, 5)
        z = stable_transit_time(lam, mu, q)
        worst = max(
            worst,
            abs(service_rate_for_transit(lam, z, q) - mu) / mu,
            abs(demand_rate_for_transit(mu, z, q) - lam) / lam,
            abs(stable_transit_time(lam, service_rate_for_transit(lam, z, q), q) - z) / z,
        )
    elapsed = time.perf_counter() - start
    acceptance(
        "1 inverse round-trips",
        worst < 1e-9 and elapsed < 1.0,
        f"max rel err {worst:.2e}, {elapsed:.3f}s",
    )


def test_pollaczek_khinchine_reduction(acceptance):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        mu = rng.uniform(0.5, 20)
        lam = rng.uniform(0.05, 0.95) * mu
        q_s = rng.uniform(1, 5)
        pk = lam**2 * q_s / (2 * mu * (mu - lam))
        worst = max(worst, abs(expected_queue_length(lam, mu, q_s, 2.0) - pk))
    acceptance("2 Pollaczek-Khinchine reduction", worst < 1e-12, f"max abs diff {worst:.2e}")


@pytest.mark.parametrize(
    "label, lam, mu, q_s, expected",
    [("M/M/1", 1.0, 2.0, 2.0, 1.0), ("M/G/1", 2.0, 3.0, 1.5, 5 / 6)],
)
def test_simulation_oracle(acceptance, label, lam, mu, q_s, expected):
    start = time.perf_counter()
    report = compare_to_kingman(ArrivalServiceModel.from_rates(lam, mu, 2.0, q_s), 1_000_000, 0.1)
    elapsed = time.perf_counter() - start
    gap = abs(report.simulated_z - expected) / expected
    acceptance(
        f"3 simulation oracle {label}",
        gap < 0.03 and elapsed < 30 and report.formula_z == pytest.approx(expected, rel=1e-12),
        f"simulated {report.simulated_z:.4f} vs {expected:.4f}, gap {gap:.2%}, {elapsed:.1f}s",
    )


def test_envelope_geometry(acceptance):
    rng = np.random.default_rng(SEED)
    envelopes = [ENV1] + [random_envelope(rng) for _ in range(50)]
    worst = 0.0
    mismatches = 0
    for raw in envelopes:
        env = validate_envelope(raw)
        for x in rng.uniform(0, env.mu_a_max, 100):
            worst = max(worst, abs(psi(env, phi(env, x)) - x))
        for y in rng.uniform(0, env.mu_d_max, 100):
            worst = max(worst, abs(phi(env, psi(env, y)) - y))
        pts = rng.uniform(-0.05, 1.1, size=(10_000, 2)) * [env.mu_a_max, env.mu_d_max]
        mismatches += sum(contains(env, a, d) != inside_polygon(raw, a, d) for a, d in pts)
    acceptance(
        "4 envelope geometry",
        worst < 1e-9 and mismatches == 0,
        f"max inversion err {worst:.2e}, {mismatches} contains mismatches over {len(envelopes)} envelopes",
    )


def test_vertex_optimality(acceptance):
    rng = np.random.default_rng(SEED)
    worst_enum = 0.0
    worst_lp = 0.0
    for _ in range(200):
        ctx, costs = random_context(rng)
        policy = optimize_slot(ctx, costs)
        wa, wd = costs.c_a * ctx.lambda_a, costs.c_d * ctx.lambda_d
        best = min(wa * za + wd * zd for za, zd in delay_policy_domain(ctx).vertices)
        worst_enum = max(worst_enum, abs(policy.expected_cost - best))
        worst_lp = max(worst_lp, abs(cross_check_lp(ctx, costs).expected_cost - policy.expected_cost))
    acceptance(
        "5 vertex optimality",
        worst_enum == 0.0 and worst_lp < 1e-7,
        f"enumeration diff {worst_enum:.1e}, LP diff {worst_lp:.2e}",
    )


def test_domain_nesting(acceptance):
    rng = np.random.default_rng(SEED)
    strict_failures = 0
    worst_margin = math.inf
    for _ in range(50):
        raw, q_a, q_d, p_a, p_d = random_slot_params(rng)
        env = validate_envelope(raw)
        dom = secondary_demand_domain(env, q_a, q_d, p_a, p_d)
        for (la, ld), pt in zip(dom.vertices, dom.service_points):
            if pt.x > 1 / p_a and not la < pt.x:
                strict_failures += 1
            if pt.y > 1 / p_d and not ld < pt.y:
                strict_failures += 1
            ctx = SlotContext(env, q_a, q_d, p_a, p_d, la, ld)
            mu_a, mu_d = congestion_rates(ctx)
            margin = (
                psi(env, min(mu_d, env.mu_d_max)) - mu_a
                if mu_d <= env.mu_d_max + 1e-9
                else -math.inf
            )
            worst_margin = min(worst_margin, margin)
    acceptance(
        "6 domain nesting",
        strict_failures == 0 and worst_margin >= -1e-9,
        f"{strict_failures} non-strict vertices, worst existence margin {worst_margin:.2e}",
    )


def _single_segment_config(rng):
    x0, y1 = rng.uniform(3, 5, 2)
    raw = [(float(x0), 0.0), (0.0, float(y1))]
    q_a, q_d = rng.uniform(1, 3, 2)
    return raw, RunwayConfiguration(validate_envelope(raw), float(q_a), float(q_d))


def _transfer_instances(rng, p):
    """Twelve two-slot and eight three-slot landing-only days.

    Each slot has its own single-segment envelope; the last slot keeps slack.
    """
    instances = []
    while len(instances) < 20:
        n = 2 if len(instances) < 12 else 3
        slots = [_single_segment_config(rng) for _ in range(n)]
        segs = [demand_segment(raw, p[0], p[1], cfg.q_a, cfg.q_d) for raw, cfg in slots]
        lam = []
        for i, ((xa, _), (_, yd)) in enumerate(segs):
            scale = rng.uniform(0.1, 0.5) if i == n - 1 else rng.uniform(0.6, 1.3)
            t = rng.uniform(0, 1) if n == 2 else 1.0
            lam.append((scale * t * xa, scale * (1 - t) * yd))
        costs = DelayCosts(*rng.uniform(0.2, 0.9, 2))
        instances.append((slots, segs, lam, costs))
    return instances


def _grid_cost(segs, lam, costs):
    if len(lam) == 2:
        return grid_transfer_cost_2slots(lam, segs[0], segs[1], costs.c_a, costs.c_d)
    return grid_transfer_cost_3slots_landing([a for a, _ in lam], segs, costs.c_a)


def test_day_planner_oracle(acceptance):
    rng = np.random.default_rng(SEED)
    p = (1.0, 1.0)
    start = time.perf_counter()
    worst_gap = 0.0
    membership_failures = 0
    disagreements = 0

    env1 = {"ENV1": RunwayConfiguration(validate_envelope(ENV1), 2.0, 2.0)}
    day = DaySchedule([SlotDemand(11, 0, "ENV1"), SlotDemand(8, 0, "ENV1")], *p)
    plan = plan_day(day, env1, DelayCosts(1, 1))
    worked_ok = abs(plan.transfers.s_a[0] - 0.25) < 1e-9 and plan.transfers.s_d[0] == 0
    grid = grid_transfer_cost_2slots([(11, 0), (8, 0)], ((10.75, 0), (0, 59 / 6)),
                                     ((10.75, 0), (0, 59 / 6)), 1.0, 1.0)
    # ENV1's first demand segment is the binding one for landing-only demand
    worst_gap = max(worst_gap, abs(grid - plan.total_transfer_cost))

    for slots, segs, lam, costs in _transfer_instances(rng, p):
        configs = {f"c{i}": cfg for i, (_, cfg) in enumerate(slots)}
        day = DaySchedule([SlotDemand(a, d, f"c{i}") for i, (a, d) in enumerate(lam)], *p)
        oracle = _grid_cost(segs, lam, costs)
        try:
            plan = plan_day(day, configs, costs)
        except InfeasibleSchedule:
            disagreements += oracle is not None
            continue
        if oracle is None:
            disagreements += 1
            continue
        worst_gap = max(worst_gap, abs(oracle - plan.total_transfer_cost))
        t = plan.transfers
        for i, (a, d) in enumerate(zip(t.lambda2_a, t.lambda2_d)):
            cfg = slots[i][1]
            dom = secondary_demand_domain(cfg.envelope, cfg.q_a, cfg.q_d, *p)
            ok = dom.contains(a, d, tol=1e-7) and inside_triangle(segs[i], a, d, 1e-7)
            membership_failures += not ok
    elapsed = time.perf_counter() - start
    acceptance(
        "7 day-planner oracle",
        worked_ok and worst_gap <= 2e-3 and membership_failures == 0
        and disagreements == 0 and elapsed < 10,
        f"worst |LP - grid| {worst_gap:.2e}, {membership_failures} membership failures, "
        f"{disagreements} feasibility disagreements, {elapsed:.1f}s",
    )


def test_conservation_and_idempotence(acceptance):
    rng = np.random.default_rng(SEED)
    configs = {
        "A": RunwayConfiguration(validate_envelope(ENV1), 2.0, 2.0),
        "B": RunwayConfiguration(validate_envelope(random_envelope(rng)), 1.5, 2.5),
    }
    worst = 0.0
    planned = 0
    for _ in range(100):
        n = int(rng.integers(1, 9))
        names = rng.choice(["A", "B"], n)
        pairs = rng.uniform(0, 10, size=(n, 2)) * rng.uniform(0.2, 1.0)
        day = DaySchedule([SlotDemand(a, d, c) for (a, d), c in zip(pairs, names)], 1, 1)
        try:
            t = plan_day(day, configs, DelayCosts(1, 1)).transfers
        except InfeasibleSchedule:
            continue
        planned += 1
        for flown, scheduled in ((t.lambda2_a, pairs[:, 0]), (t.lambda2_d, pairs[:, 1])):
            worst = max(worst, abs(math.fsum(flown) - math.fsum(scheduled)))

    nonzero = 0
    for _ in range(50):
        n = int(rng.integers(1, 9))
        slots = []
        while len(slots) < n:
            c = str(rng.choice(["A", "B"]))
            cfg = configs[c]
            dom = secondary_demand_domain(cfg.envelope, cfg.q_a, cfg.q_d, 1, 1)
            a, d = rng.uniform(0, 10, 2)
            if dom.contains(a, d):
                slots.append(SlotDemand(a, d, c))
        t = plan_day(DaySchedule(slots, 1, 1), configs, DelayCosts(1, 1)).transfers
        nonzero += bool(t.s_a.any() or t.s_d.any())
    acceptance(
        "8 conservation and idempotence",
        planned >= 20 and worst < 1e-9 and nonzero == 0,
        f"{planned} plans, max flight-count drift {worst:.1e}, {nonzero} nonzero idle plans",
    )


def test_lp_solver_equivalence(acceptance):
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst = 0.0
    status_mismatch = 0
    for _ in range(500):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(1, 6))
        A = np.vstack([rng.normal(size=(m, n)), np.eye(n)])
        b = np.concatenate([rng.uniform(-1, 5, size=m), rng.uniform(1, 10, size=n)])
        c = rng.normal(size=n)
        sol = solve(LinearProgram(c, A, b))
        expected = brute_force_lp(c, A, b)
        if expected is None:
            status_mismatch += sol.status is not LpStatus.INFEASIBLE
        elif not sol.is_optimal:
            status_mismatch += 1
        else:
            worst = max(worst, abs(sol.objective_value - expected))
    elapsed = time.perf_counter() - start
    acceptance(
        "9 LP solver equivalence",
        worst < 1e-7 and status_mismatch == 0,
        f"max objective diff {worst:.2e}, {status_mismatch} status mismatches, {elapsed:.1f}s",
    )
