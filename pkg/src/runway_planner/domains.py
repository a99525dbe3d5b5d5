"""Derived convex regions for one slot.

* sustainable-policy domain: envelope points with both service rates at or
  above their congestion rates (service-rate space);
* delay-policy domain: its image under the rate-to-transit-time map;
* secondary demand domain: demand rates for which some sustainable policy
  exists, obtained by mapping the envelope clipped at ``(1/p_a, 1/p_d)``
  through the congestion demand rate.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import queueing
from .envelope import (
    CapacityEnvelope,
    ControlPoint,
    HalfPlane,
    phi,
    psi,
    segment_half_planes,
)
from .errors import EmptyDomain, InfeasibleTolerance, InvalidInput, NoSustainablePolicy

EMPTY_TOL = 1e-12
COINCIDENT_TOL = 1e-12


@dataclass(frozen=True)
class SlotContext:
    envelope: CapacityEnvelope
    q_a: float
    q_d: float
    p_a: float
    p_d: float
    lambda_a: float
    lambda_d: float

    def __post_init__(self):
        for name in ("q_a", "q_d", "p_a", "p_d", "lambda_a", "lambda_d"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("q_a", "q_d", "p_a", "p_d"):
            if not getattr(self, name) > 0:
                raise InvalidInput(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("lambda_a", "lambda_d"):
            if not getattr(self, name) >= 0:
                raise InvalidInput(f"{name} must be nonnegative, got {getattr(self, name)}")

    def with_demand(self, lambda_a: float, lambda_d: float) -> "SlotContext":
        return SlotContext(
            self.envelope, self.q_a, self.q_d, self.p_a, self.p_d, lambda_a, lambda_d
        )


def congestion_rates(ctx: SlotContext) -> tuple[float, float]:
    return (
        queueing.congestion_service_rate(ctx.lambda_a, ctx.p_a, ctx.q_a),
        queueing.congestion_service_rate(ctx.lambda_d, ctx.p_d, ctx.q_d),
    )


def saturation_rates(ctx: SlotContext) -> tuple[float, float]:
    """Service-rate limits beyond which the other service saturates.

    Returns ``(Psi(lambda_d), Phi(lambda_a))``; demand above the envelope
    maximum makes the corresponding limit ``nan``.
    """
    env = ctx.envelope
    a = psi(env, ctx.lambda_d) if ctx.lambda_d <= env.mu_d_max else float("nan")
    d = phi(env, ctx.lambda_a) if ctx.lambda_a <= env.mu_a_max else float("nan")
    return a, d


def _clip_margin(env: CapacityEnvelope, min_x: float, min_y: float) -> float:
    """``psi(min_y) - min_x``, or ``-inf`` when ``min_y`` exceeds the envelope."""
    if min_y > env.mu_d_max:
        return float("-inf")
    return psi(env, min_y) - min_x


def sustainable_exists(ctx: SlotContext) -> bool:
    mu_a_cong, mu_d_cong = congestion_rates(ctx)
    return _clip_margin(ctx.envelope, mu_a_cong, mu_d_cong) > EMPTY_TOL


def _close(p: tuple[float, float], r: tuple[float, float]) -> bool:
    scale = max(1.0, abs(p[0]), abs(p[1]))
    return abs(p[0] - r[0]) <= COINCIDENT_TOL * scale and abs(p[1] - r[1]) <= COINCIDENT_TOL * scale


@dataclass(frozen=True)
class ClippedEnvelope:
    """Envelope arc restricted to ``x >= corner.x`` and ``y >= corner.y``.

    ``points`` runs from ``(psi(corner.y), corner.y)`` to
    ``(corner.x, phi(corner.x))`` with coincident control points collapsed.
    """

    corner: ControlPoint
    points: tuple[ControlPoint, ...]

    def half_planes(self) -> list[HalfPlane]:
        return segment_half_planes(self.points)

    def contains(self, mu_a: float, mu_d: float) -> bool:
        if mu_a < self.corner.x - EMPTY_TOL or mu_d < self.corner.y - EMPTY_TOL:
            return False
        return all(hp.satisfied(mu_a, mu_d) for hp in self.half_planes())


def clip_envelope(env: CapacityEnvelope, min_x: float, min_y: float) -> ClippedEnvelope:
    if min_x < 0 or min_y < 0:
        raise InvalidInput(f"clip corner must be nonnegative, got ({min_x}, {min_y})")
    if not _clip_margin(env, min_x, min_y) > EMPTY_TOL:
        raise EmptyDomain(f"no envelope point with x >= {min_x} and y >= {min_y}")

    low = ControlPoint(psi(env, min_y), min_y)
    left = ControlPoint(min_x, phi(env, min_x))
    pts: list[ControlPoint] = []
    for pt in env.points:
        if pt.y < min_y:
            pt = low
        elif pt.x < min_x:
            pt = left
        if pts and _close(pts[-1], pt):
            continue
        pts.append(pt)
    # a retained control point may lie within rounding of a replacement endpoint
    if not _close(pts[0], low):
        pts.insert(0, low)
    if not _close(pts[-1], left):
        pts.append(left)
    return ClippedEnvelope(ControlPoint(min_x, min_y), tuple(pts))


def sustainable_policy_domain(ctx: SlotContext) -> ClippedEnvelope:
    mu_a_cong, mu_d_cong = congestion_rates(ctx)
    try:
        return clip_envelope(ctx.envelope, mu_a_cong, mu_d_cong)
    except EmptyDomain as exc:
        raise NoSustainablePolicy(
            f"no sustainable policy for demand ({ctx.lambda_a}, {ctx.lambda_d})"
        ) from exc


@dataclass(frozen=True)
class DelayPolicyDomain:
    """Transit-time polygon above the polyline through ``vertices``.

    ``vertices`` have increasing landing and decreasing takeoff transit
    times; the first reaches ``p_d`` and the last reaches ``p_a``.
    ``service_points`` are the sustainable-policy vertices they come from.
    """

    vertices: tuple[tuple[float, float], ...]
    p_a: float
    p_d: float
    service_points: tuple[ControlPoint, ...]

    def half_planes(self) -> list[HalfPlane]:
        return segment_half_planes(self.vertices)

    def contains(self, z_a: float, z_d: float) -> bool:
        if z_a > self.p_a + EMPTY_TOL or z_d > self.p_d + EMPTY_TOL:
            return False
        return all(hp.satisfied(z_a, z_d) for hp in self.half_planes())


def delay_policy_domain(ctx: SlotContext) -> DelayPolicyDomain:
    clipped = sustainable_policy_domain(ctx)
    verts = [
        (
            queueing.stable_transit_time(ctx.lambda_a, pt.x, ctx.q_a),
            queueing.stable_transit_time(ctx.lambda_d, pt.y, ctx.q_d),
        )
        for pt in clipped.points
    ]
    # corner images sit on the tolerance caps by construction
    verts[0] = (verts[0][0], ctx.p_d)
    verts[-1] = (ctx.p_a, verts[-1][1])
    return DelayPolicyDomain(tuple(verts), ctx.p_a, ctx.p_d, clipped.points)


@dataclass(frozen=True)
class DemandDomain:
    """Secondary (sustainable demand) domain of one configuration.

    ``vertices[j]`` is the demand pair served at exactly the tolerances by
    the clipped envelope point ``service_points[j]``.
    """

    vertices: tuple[tuple[float, float], ...]
    service_points: tuple[ControlPoint, ...]
    q_a: float
    q_d: float
    p_a: float
    p_d: float

    def half_planes(self) -> list[HalfPlane]:
        return segment_half_planes(self.vertices)

    def contains(self, lambda_a: float, lambda_d: float, tol: float | None = None) -> bool:
        if tol is None:
            if lambda_a < 0 or lambda_d < 0:
                return False
            return all(hp.satisfied(lambda_a, lambda_d) for hp in self.half_planes())
        if lambda_a < -tol or lambda_d < -tol:
            return False
        return all(hp.slack(lambda_a, lambda_d) >= -tol for hp in self.half_planes())

    def vertex_index(self, lambda_a: float, lambda_d: float, tol: float = 1e-9) -> int | None:
        for j, (va, vd) in enumerate(self.vertices):
            if abs(va - lambda_a) <= tol and abs(vd - lambda_d) <= tol:
                return j
        return None


def secondary_demand_domain(
    env: CapacityEnvelope, q_a: float, q_d: float, p_a: float, p_d: float
) -> DemandDomain:
    for name, value in (("q_a", q_a), ("q_d", q_d), ("p_a", p_a), ("p_d", p_d)):
        if not value > 0:
            raise InvalidInput(f"{name} must be positive, got {value}")
    try:
        clipped = clip_envelope(env, 1.0 / p_a, 1.0 / p_d)
    except EmptyDomain as exc:
        raise InfeasibleTolerance(
            f"tolerances ({p_a}, {p_d}) are unreachable for envelope {env.name!r}"
        ) from exc
    verts = [
        (
            queueing.congestion_demand_rate(pt.x, p_a, q_a),
            queueing.congestion_demand_rate(pt.y, p_d, q_d),
        )
        for pt in clipped.points
    ]
    verts[0] = (verts[0][0], 0.0)
    verts[-1] = (0.0, verts[-1][1])
    return DemandDomain(tuple(verts), clipped.points, q_a, q_d, p_a, p_d)
