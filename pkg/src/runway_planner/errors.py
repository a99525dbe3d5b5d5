"""Exception hierarchy shared by all runway_planner modules."""


class RunwayPlannerError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(RunwayPlannerError, ValueError):
    pass


class OutOfRange(InvalidInput):
    pass


class SaturatedQueue(RunwayPlannerError):
    """Demand rate reaches the service rate; no stationary regime exists."""


class EnvelopeError(InvalidInput):
    """A control-point list does not describe a valid capacity envelope.

    ``index`` is the offending control point position.
    """

    def __init__(self, message, index):
        super().__init__(f"{message} (control point {index})")
        self.index = index


class OrderingViolation(EnvelopeError):
    pass


class EndpointViolation(EnvelopeError):
    pass


class ConvexityViolation(EnvelopeError):
    pass


class EmptyDomain(RunwayPlannerError):
    pass


class NoSustainablePolicy(EmptyDomain):
    pass


class InfeasibleTolerance(EmptyDomain):
    """Delay tolerances the runway configuration can never meet."""


class NumericalFailure(RunwayPlannerError):
    pass


class InfeasibleSchedule(RunwayPlannerError):
    pass


class NotAVertex(RunwayPlannerError):
    pass


class UnstableSystem(InvalidInput):
    pass


class InvalidVariability(InvalidInput):
    pass


class DegenerateObjective(RuntimeWarning):
    """Both demand rates are zero, so the delay cost is identically zero."""
