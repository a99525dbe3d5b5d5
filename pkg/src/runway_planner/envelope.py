"""Capacity envelopes as ordered convex control-point polygons.

An envelope is the list of control points ``(x_j, y_j)``, ``j = 0..J``, with
``x`` (arrival service rate) strictly decreasing from ``x_0 = mu_a_max`` to
``x_J = 0`` and ``y`` (departure service rate) strictly increasing from
``y_0 = 0`` to ``y_J = mu_d_max``. Together with the origin the points bound
the convex set of admissible service policies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    ConvexityViolation,
    EndpointViolation,
    InvalidInput,
    OrderingViolation,
    OutOfRange,
)

RANGE_TOL = 1e-12
CONTAINS_RTOL = 1e-12


class ControlPoint(NamedTuple):
    x: float
    y: float


class HalfPlane(NamedTuple):
    """Constraint ``a_coeff * mu_a + d_coeff * mu_d <= rhs``."""

    a_coeff: float
    d_coeff: float
    rhs: float

    def slack(self, a: float, d: float) -> float:
        return self.rhs - (self.a_coeff * a + self.d_coeff * d)

    def satisfied(self, a: float, d: float) -> bool:
        scale = max(1.0, abs(self.rhs), abs(self.a_coeff * a), abs(self.d_coeff * d))
        return self.slack(a, d) >= -CONTAINS_RTOL * scale


def segment_half_planes(points: Sequence[tuple[float, float]]) -> list[HalfPlane]:
    """Half-planes through consecutive points, one per segment.

    Uses the orientation of the throughput polygon: for points ordered with
    decreasing first and increasing second coordinate, the admissible side is
    towards the origin. The same formula applied to delay-space vertices
    (increasing first, decreasing second coordinate) keeps the side away from
    the origin.
    """
    planes = []
    for (x0, y0), (x1, y1) in zip(points[:-1], points[1:]):
        planes.append(HalfPlane(y1 - y0, x0 - x1, x0 * y1 - x1 * y0))
    return planes


@dataclass(frozen=True)
class CapacityEnvelope:
    points: tuple[ControlPoint, ...]
    name: str = ""

    @property
    def mu_a_max(self) -> float:
        return self.points[0].x

    @property
    def mu_d_max(self) -> float:
        return self.points[-1].y

    @property
    def n_segments(self) -> int:
        return len(self.points) - 1

    def half_planes(self) -> list[HalfPlane]:
        return half_planes(self)

    def phi(self, mu_a: float) -> float:
        return phi(self, mu_a)

    def psi(self, mu_d: float) -> float:
        return psi(self, mu_d)

    def contains(self, mu_a: float, mu_d: float) -> bool:
        return contains(self, mu_a, mu_d)


def validate_envelope(raw_points: Iterable[Sequence[float]], name: str = "") -> CapacityEnvelope:
    """Check ordering, endpoints and concavity; return an immutable envelope."""
    pts = []
    for i, raw in enumerate(raw_points):
        if len(raw) != 2:
            raise InvalidInput(f"control point {i} must have two coordinates, got {raw!r}")
        x, y = float(raw[0]), float(raw[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InvalidInput(f"control point {i} is not finite: {raw!r}")
        pts.append(ControlPoint(x, y))
    if len(pts) < 2:
        raise InvalidInput(f"an envelope needs at least 2 control points, got {len(pts)}")

    for j in range(1, len(pts)):
        if not pts[j].x < pts[j - 1].x:
            raise OrderingViolation("arrival rates must strictly decrease", j)
        if not pts[j].y > pts[j - 1].y:
            raise OrderingViolation("departure rates must strictly increase", j)
    if pts[0].y != 0.0:
        raise EndpointViolation("first control point must have y = 0", 0)
    if pts[-1].x != 0.0:
        raise EndpointViolation("last control point must have x = 0", len(pts) - 1)

    # turn direction at each interior vertex; positive means the slope keeps rising
    for j in range(1, len(pts) - 1):
        dx1, dy1 = pts[j].x - pts[j - 1].x, pts[j].y - pts[j - 1].y
        dx2, dy2 = pts[j + 1].x - pts[j].x, pts[j + 1].y - pts[j].y
        if not dx1 * dy2 - dy1 * dx2 > 0:
            raise ConvexityViolation("segment slopes must strictly increase along the envelope", j)
    return CapacityEnvelope(tuple(pts), name)


def half_planes(env: CapacityEnvelope) -> list[HalfPlane]:
    return segment_half_planes(env.points)


def phi(env: CapacityEnvelope, mu_a: float) -> float:
    """Maximal departure rate compatible with arrival rate ``mu_a``."""
    x0 = env.mu_a_max
    if not (-RANGE_TOL <= mu_a <= x0 + RANGE_TOL):
        raise OutOfRange(f"arrival rate {mu_a} outside [0, {x0}]")
    mu_a = min(max(mu_a, 0.0), x0)
    return min(
        (hp.rhs - mu_a * hp.a_coeff) / hp.d_coeff for hp in half_planes(env)
    )


def psi(env: CapacityEnvelope, mu_d: float) -> float:
    """Maximal arrival rate compatible with departure rate ``mu_d``."""
    yj = env.mu_d_max
    if not (-RANGE_TOL <= mu_d <= yj + RANGE_TOL):
        raise OutOfRange(f"departure rate {mu_d} outside [0, {yj}]")
    mu_d = min(max(mu_d, 0.0), yj)
    return min(
        (hp.rhs - mu_d * hp.d_coeff) / hp.a_coeff for hp in half_planes(env)
    )


def contains(env: CapacityEnvelope, mu_a: float, mu_d: float) -> bool:
    """Non-strict membership in the throughput polygon.

    Each half-plane is tested with a relative slack of ``CONTAINS_RTOL`` so
    that points computed by :func:`phi` or :func:`psi` count as inside.
    """
    if mu_a < 0 or mu_d < 0:
        return False
    return all(hp.satisfied(mu_a, mu_d) for hp in half_planes(env))
