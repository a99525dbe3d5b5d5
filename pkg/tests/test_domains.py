import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import demand_segment, random_envelope, random_slot_params
from runway_planner.domains import (
    ClippedEnvelope,
    SlotContext,
    clip_envelope,
    congestion_rates,
    delay_policy_domain,
    saturation_rates,
    secondary_demand_domain,
    sustainable_exists,
    sustainable_policy_domain,
)
from runway_planner.envelope import phi, psi, validate_envelope
from runway_planner.errors import (
    EmptyDomain,
    InfeasibleTolerance,
    InvalidInput,
    NoSustainablePolicy,
)
from runway_planner.queueing import service_rate_for_transit, stable_transit_time

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def assert_points(actual, expected, tol=1e-12):
    assert len(actual) == len(expected)
    for (ax, ay), (ex, ey) in zip(actual, expected):
        assert ax == pytest.approx(ex, abs=tol)
        assert ay == pytest.approx(ey, abs=tol)


def test_context_validation(env1):
    with pytest.raises(InvalidInput):
        SlotContext(env1, 0, 2, 1, 1, 1, 1)
    with pytest.raises(InvalidInput):
        SlotContext(env1, 2, 2, 1, 1, -1, 1)
    ctx = SlotContext(env1, 2, 2, 1, 1, 2, 2)
    assert ctx.with_demand(0, 0).lambda_a == 0.0


def test_sustainable_exists_examples(ctx1):
    assert congestion_rates(ctx1) == pytest.approx((3, 3))
    assert sustainable_exists(ctx1)
    assert not sustainable_exists(ctx1.with_demand(11.9, 0))
    assert sustainable_exists(ctx1.with_demand(0, 0))


def test_saturation_rates(ctx1):
    assert saturation_rates(ctx1) == pytest.approx((psi(ctx1.envelope, 2), phi(ctx1.envelope, 2)))
    assert np.isnan(saturation_rates(ctx1.with_demand(13, 0))[1])


def test_clip_examples(env1):
    clipped = clip_envelope(env1, 3, 3)
    assert clipped.corner == (3, 3)
    assert_points(clipped.points, [(11.25, 3), (10, 8), (6, 10), (3, 10.5)])
    assert clip_envelope(env1, 0, 0).points == tuple(env1.points)
    with pytest.raises(EmptyDomain):
        clip_envelope(env1, 11.5, 3)
    with pytest.raises(EmptyDomain):
        clip_envelope(env1, 0, 11.5)
    with pytest.raises(InvalidInput):
        clip_envelope(env1, -1, 0)


def test_clip_collapses_coincident_points(env1):
    # a corner on the envelope leaves a zero-area region
    with pytest.raises(EmptyDomain):
        clip_envelope(env1, 10, 8)
    clipped = clip_envelope(env1, 6, 0)
    assert_points(clipped.points, [(12, 0), (10, 8), (6, 10)])


def test_sustainable_policy_domain(ctx1):
    dom = sustainable_policy_domain(ctx1)
    assert isinstance(dom, ClippedEnvelope)
    assert dom.corner == pytest.approx((3, 3))
    assert_points(dom.points, [(11.25, 3), (10, 8), (6, 10), (3, 10.5)])
    assert dom.contains(10, 8)
    assert not dom.contains(2.9, 8)
    assert not dom.contains(11, 8)
    assert sustainable_policy_domain(ctx1.with_demand(0, 0)).corner == pytest.approx((1, 1))
    with pytest.raises(NoSustainablePolicy):
        sustainable_policy_domain(ctx1.with_demand(11.9, 0))


def test_delay_policy_domain(ctx1):
    dom = delay_policy_domain(ctx1)
    assert_points(dom.vertices, [(1 / 9.25, 1), (0.125, 1 / 6), (0.25, 0.125), (1, 1 / 8.5)])
    assert dom.vertices[0][1] == 1 and dom.vertices[-1][0] == 1
    for (za, zd), pt in zip(dom.vertices[1:-1], dom.service_points[1:-1]):
        assert service_rate_for_transit(2, za, 2) == pytest.approx(pt.x, rel=1e-12)
        assert service_rate_for_transit(2, zd, 2) == pytest.approx(pt.y, rel=1e-12)
    assert dom.contains(0.5, 0.5)
    assert not dom.contains(0.1, 0.1)
    assert not dom.contains(1.1, 0.5)


def test_secondary_demand_domain_env1(env1):
    dom = secondary_demand_domain(env1, 2, 2, 1, 1)
    assert_points(dom.service_points, [(11.75, 1), (10, 8), (6, 10), (1, 65 / 6)])
    assert_points(dom.vertices, [(10.75, 0), (9, 7), (5, 9), (0, 59 / 6)])
    assert dom.contains(0, 0)
    assert not dom.contains(11, 0)
    assert dom.contains(9, 7)
    assert not dom.contains(-0.1, 0)
    assert dom.vertex_index(9, 7) == 1
    assert dom.vertex_index(0, 0) is None


def test_secondary_demand_domain_errors(env1):
    with pytest.raises(InfeasibleTolerance):
        secondary_demand_domain(env1, 2, 2, 0.05, 1)
    with pytest.raises(InvalidInput):
        secondary_demand_domain(env1, 2, 2, 0, 1)


def test_single_segment_demand_domain_matches_bisection():
    raw = [(10.0, 0.0), (0.0, 8.0)]
    env = validate_envelope(raw)
    dom = secondary_demand_domain(env, 1.5, 2.5, 0.8, 1.2)
    expected = demand_segment(raw, 0.8, 1.2, 1.5, 2.5)
    assert_points(dom.vertices, expected, tol=1e-9)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_domain_invariants(seed):
    rng = np.random.default_rng(seed)
    raw, q_a, q_d, p_a, p_d = random_slot_params(rng)
    env = validate_envelope(raw)
    assert clip_envelope(env, 0, 0).points == tuple(env.points)

    dom = secondary_demand_domain(env, q_a, q_d, p_a, p_d)
    xs = [v[0] for v in dom.vertices]
    ys = [v[1] for v in dom.vertices]
    assert all(np.diff(xs) < 0) and all(np.diff(ys) > 0)
    for (la, ld), pt in zip(dom.vertices, dom.service_points):
        assert phi(env, pt.x) == pytest.approx(pt.y, abs=1e-9)
        if pt.x > 1 / p_a:
            assert la < pt.x
        if pt.y > 1 / p_d:
            assert ld < pt.y

    # vertices admit a sustainable policy up to rounding; edge midpoints do
    # too while the congestion rate is convex in demand (variability <= 2)
    ctx = SlotContext(env, q_a, q_d, p_a, p_d, 0, 0)
    ts = (0.0, 0.5) if max(q_a, q_d) <= 2 else (0.0,)
    for v0, v1 in zip(dom.vertices[:-1], dom.vertices[1:]):
        for t in ts:
            la = (1 - t) * v0[0] + t * v1[0]
            ld = (1 - t) * v0[1] + t * v1[1]
            mu_a, mu_d = congestion_rates(ctx.with_demand(la, ld))
            assert mu_d <= env.mu_d_max + 1e-9
            assert psi(env, min(mu_d, env.mu_d_max)) - mu_a >= -1e-9

    # random sustainable demand: vertex transit times within tolerances
    la, ld = rng.uniform(0, 0.9) * np.array(dom.vertices[len(dom.vertices) // 2])
    ctx = ctx.with_demand(la, ld)
    assert sustainable_exists(ctx)
    policy_dom = sustainable_policy_domain(ctx)
    for pt in policy_dom.points:
        assert stable_transit_time(la, pt.x, q_a) <= p_a * (1 + 1e-9)
        assert stable_transit_time(ld, pt.y, q_d) <= p_d * (1 + 1e-9)
    delay = delay_policy_domain(ctx)
    assert all(np.diff([v[0] for v in delay.vertices]) > 0)
    assert all(np.diff([v[1] for v in delay.vertices]) < 0)
    assert all(za <= p_a and zd <= p_d for za, zd in delay.vertices)


@given(seeds)
def test_demand_contains_rejects_points_beyond_vertices(seed):
    rng = np.random.default_rng(seed)
    raw = random_envelope(rng)
    env = validate_envelope(raw)
    dom = secondary_demand_domain(env, 2.0, 2.0, 2.0, 2.0)
    for la, ld in dom.vertices:
        assert dom.contains(la, ld)
        assert not dom.contains(la + 1e-6, ld + 1e-6)


def test_high_variability_edge_midpoint_is_not_sustainable(env1):
    dom = secondary_demand_domain(env1, 4.0, 4.0, 1.0, 1.0)
    (a0, d0), (a1, d1) = dom.vertices[1], dom.vertices[2]
    ctx = SlotContext(env1, 4.0, 4.0, 1.0, 1.0, (a0 + a1) / 2, (d0 + d1) / 2)
    assert dom.contains(ctx.lambda_a, ctx.lambda_d)
    assert not sustainable_exists(ctx)
