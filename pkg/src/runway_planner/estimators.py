"""scikit-learn compatible front ends.

Both estimators take demand as an ``(n, 2)`` array of ``(lambda_a, lambda_d)``
rows, so they can sit in pipelines and be cloned or grid-searched through
``get_params``/``set_params``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .day_planner import DaySchedule, RunwayConfiguration, SlotDemand, plan_day
from .domains import SlotContext, secondary_demand_domain
from .envelope import validate_envelope
from .slot_optimizer import DelayCosts, optimize_slot


def _check_demand(X) -> np.ndarray:
    X = check_array(X, dtype=np.float64, ensure_min_samples=1)
    if X.shape[1] != 2:
        raise ValueError(f"demand must have 2 columns (lambda_a, lambda_d), got {X.shape[1]}")
    if (X < 0).any():
        raise ValueError("demand rates must be nonnegative")
    return X


class _RunwayParamsMixin:
    def _validate_params_(self):
        self.envelope_ = validate_envelope(self.control_points)
        self.costs_ = DelayCosts(self.c_a, self.c_d)
        self.demand_domain_ = secondary_demand_domain(
            self.envelope_, self.q_a, self.q_d, self.p_a, self.p_d
        )


class SlotPolicyOptimizer(_RunwayParamsMixin, BaseEstimator):
    """Delay-cost-minimizing service policy for each demand row.

    ``predict`` returns service rates ``(mu_a, mu_d)``; ``transform`` returns
    the matching stable transit times ``(z_a, z_d)``. Raises
    :class:`~runway_planner.errors.NoSustainablePolicy` for demand outside
    the secondary domain.
    """

    def __init__(self, control_points=((12.0, 0.0), (0.0, 11.0)), q_a=2.0, q_d=2.0,
                 p_a=1.0, p_d=1.0, c_a=1.0, c_d=1.0):
        self.control_points = control_points
        self.q_a = q_a
        self.q_d = q_d
        self.p_a = p_a
        self.p_d = p_d
        self.c_a = c_a
        self.c_d = c_d

    def fit(self, X=None, y=None):
        self._validate_params_()
        if X is not None:
            _check_demand(X)
        self.n_features_in_ = 2
        return self

    def _policies(self, X):
        check_is_fitted(self, "envelope_")
        X = _check_demand(X)
        out = []
        for lam_a, lam_d in X:
            ctx = SlotContext(self.envelope_, self.q_a, self.q_d, self.p_a, self.p_d,
                              float(lam_a), float(lam_d))
            out.append(optimize_slot(ctx, self.costs_))
        return out

    def predict(self, X):
        return np.array([[p.mu_a, p.mu_d] for p in self._policies(X)])

    def transform(self, X):
        return np.array([[p.z_a, p.z_d] for p in self._policies(X)])

    def expected_cost(self, X):
        return np.array([p.expected_cost for p in self._policies(X)])


class TransferPlanner(_RunwayParamsMixin, TransformerMixin, BaseEstimator):
    """Minimal-cost slot transfers for a day run under one configuration.

    Rows of ``X`` are consecutive slots. ``fit`` solves the transfer program
    and keeps the plan in ``plan_``; ``transform`` returns the secondary
    schedule of any day. Raises
    :class:`~runway_planner.errors.InfeasibleSchedule` when no transfer plan
    is sustainable.
    """

    def __init__(self, control_points=((12.0, 0.0), (0.0, 11.0)), q_a=2.0, q_d=2.0,
                 p_a=1.0, p_d=1.0, c_a=1.0, c_d=1.0):
        self.control_points = control_points
        self.q_a = q_a
        self.q_d = q_d
        self.p_a = p_a
        self.p_d = p_d
        self.c_a = c_a
        self.c_d = c_d

    def _plan(self, X):
        X = _check_demand(X)
        day = DaySchedule(tuple(SlotDemand(float(a), float(d), "default") for a, d in X),
                          self.p_a, self.p_d)
        configs = {"default": RunwayConfiguration(self.envelope_, self.q_a, self.q_d)}
        return plan_day(day, configs, self.costs_)

    def fit(self, X, y=None):
        self._validate_params_()
        self.plan_ = self._plan(X)
        self.transfers_ = np.column_stack([self.plan_.transfers.s_a, self.plan_.transfers.s_d])
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "envelope_")
        t = self._plan(X).transfers
        return np.column_stack([t.lambda2_a, t.lambda2_d])
