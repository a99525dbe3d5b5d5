"""Runway capacity envelopes, stable-queue transit times and slot planning."""
from .day_planner import (
    DayPlan,
    DaySchedule,
    RunwayConfiguration,
    SlotDemand,
    TransferPlan,
    build_transfer_lp,
    plan_day,
    vertex_slot_policy,
)
from .domains import (
    ClippedEnvelope,
    DelayPolicyDomain,
    DemandDomain,
    SlotContext,
    clip_envelope,
    delay_policy_domain,
    secondary_demand_domain,
    sustainable_exists,
    sustainable_policy_domain,
)
from .envelope import (
    CapacityEnvelope,
    ControlPoint,
    HalfPlane,
    contains,
    half_planes,
    phi,
    psi,
    validate_envelope,
)
from .estimators import SlotPolicyOptimizer, TransferPlanner
from .queueing import (
    QueueParams,
    Regime,
    classify_regime,
    congestion_demand_rate,
    congestion_service_rate,
    demand_rate_for_transit,
    expected_queue_length,
    service_rate_for_transit,
    stable_transit_time,
)
from .slot_optimizer import DelayCosts, SlotPolicy, cross_check_lp, optimize_slot
from . import errors

__version__ = "0.1.0"

__all__ = [
    "CapacityEnvelope",
    "ClippedEnvelope",
    "ControlPoint",
    "DayPlan",
    "DaySchedule",
    "DelayCosts",
    "DelayPolicyDomain",
    "DemandDomain",
    "HalfPlane",
    "QueueParams",
    "Regime",
    "RunwayConfiguration",
    "SlotContext",
    "SlotDemand",
    "SlotPolicy",
    "SlotPolicyOptimizer",
    "TransferPlan",
    "TransferPlanner",
    "build_transfer_lp",
    "classify_regime",
    "clip_envelope",
    "congestion_demand_rate",
    "congestion_service_rate",
    "contains",
    "cross_check_lp",
    "delay_policy_domain",
    "demand_rate_for_transit",
    "errors",
    "expected_queue_length",
    "half_planes",
    "optimize_slot",
    "phi",
    "plan_day",
    "psi",
    "secondary_demand_domain",
    "service_rate_for_transit",
    "stable_transit_time",
    "sustainable_exists",
    "sustainable_policy_domain",
    "validate_envelope",
    "vertex_slot_policy",
]
