"""Small dense linear programs: ``min c.x  s.t.  A x <= b,  x >= 0``.

Solved with a two-phase tableau simplex using Bland's rule, which cannot
cycle. Problem sizes here are at most a few hundred rows and columns.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidInput, NumericalFailure

PIVOT_TOL = 1e-11
FEAS_TOL = 1e-9
MAX_PIVOTS = 100_000


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        b = np.asarray(self.b, dtype=float).reshape(-1)
        A = np.asarray(self.A, dtype=float)
        if A.size == 0:
            A = A.reshape(b.shape[0], c.shape[0])
        if A.ndim != 2 or A.shape != (b.shape[0], c.shape[0]):
            raise InvalidInput(
                f"inconsistent LP dimensions: A {A.shape}, b {b.shape}, c {c.shape}"
            )
        if not (np.isfinite(A).all() and np.isfinite(b).all() and np.isfinite(c).all()):
            raise InvalidInput("LP data must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    @property
    def n_constraints(self) -> int:
        return self.b.shape[0]


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    x: np.ndarray
    objective_value: float

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    """Constraint rows ``T`` with right-hand side ``rhs`` and a cost row."""

    def __init__(self, T, rhs, basis):
        self.T = T
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def set_costs(self, cost):
        cb = cost[self.basis]
        self.reduced = cost - cb @ self.T
        self.obj = float(cb @ self.rhs)

    def pivot(self, row, col):
        piv = self.T[row, col]
        if abs(piv) < PIVOT_TOL:
            raise NumericalFailure(f"pivot {piv:.3e} below tolerance")
        self.T[row] /= piv
        self.rhs[row] /= piv
        colvals = self.T[:, col].copy()
        colvals[row] = 0.0
        self.T -= np.outer(colvals, self.T[row])
        self.rhs -= colvals * self.rhs[row]
        rc = self.reduced[col]
        self.reduced -= rc * self.T[row]
        self.obj += rc * self.rhs[row]
        self.basis[row] = col
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise NumericalFailure("pivot limit exceeded")

    def run(self, allowed: int) -> bool:
        """Iterate to optimality over the first ``allowed`` columns.

        Returns False if an improving unbounded ray is found.
        """
        while True:
            neg = np.nonzero(self.reduced[:allowed] < -FEAS_TOL)[0]
            if neg.size == 0:
                return True
            col = int(neg[0])
            column = self.T[:, col]
            rows = np.nonzero(column > PIVOT_TOL)[0]
            if rows.size == 0:
                return False
            ratios = np.maximum(self.rhs[rows], 0.0) / column[rows]
            best = ratios.min()
            tied = rows[ratios <= best + FEAS_TOL * max(1.0, abs(best))]
            row = int(min(tied, key=lambda r: self.basis[r]))
            self.pivot(row, col)


def solve(lp: LinearProgram) -> LpSolution:
    m, n = lp.A.shape
    neg_rows = np.nonzero(lp.b < 0)[0]
    k = neg_rows.size
    ncols = n + m + k

    T = np.zeros((m, ncols))
    T[:, :n] = lp.A
    T[:, n : n + m] = np.eye(m)
    rhs = lp.b.copy()
    T[neg_rows] *= -1.0
    rhs[neg_rows] *= -1.0
    basis = np.arange(n, n + m)
    for offset, r in enumerate(neg_rows):
        T[r, n + m + offset] = 1.0
        basis[r] = n + m + offset

    tab = _Tableau(T, rhs, basis)

    if k:
        phase1 = np.zeros(ncols)
        phase1[n + m :] = 1.0
        tab.set_costs(phase1)
        tab.run(ncols)
        scale = max(1.0, float(np.abs(lp.b).max()))
        if tab.obj > FEAS_TOL * scale:
            return LpSolution(LpStatus.INFEASIBLE, np.full(n, np.nan), float("nan"))
        _drive_out_artificials(tab, n + m)

    keep = n + m
    tab.T = tab.T[:, :keep]
    cost = np.zeros(keep)
    cost[:n] = lp.c
    tab.set_costs(cost)
    if not tab.run(keep):
        return LpSolution(LpStatus.UNBOUNDED, np.full(n, np.nan), float("-inf"))

    x = np.zeros(n)
    for r, var in enumerate(tab.basis):
        if var < n:
            x[var] = tab.rhs[r]
    x[np.abs(x) < FEAS_TOL] = 0.0
    if not np.isfinite(x).all():
        raise NumericalFailure("non-finite solution")
    return LpSolution(LpStatus.OPTIMAL, x, float(lp.c @ x))


def _drive_out_artificials(tab: _Tableau, first_artificial: int) -> None:
    """Pivot zero-level artificials out of the basis; drop redundant rows."""
    redundant = []
    for r in range(tab.T.shape[0]):
        if tab.basis[r] < first_artificial:
            continue
        candidates = np.nonzero(np.abs(tab.T[r, :first_artificial]) > PIVOT_TOL)[0]
        if candidates.size == 0:
            redundant.append(r)
        else:
            tab.pivot(r, int(candidates[0]))
    if redundant:
        keep = np.setdiff1d(np.arange(tab.T.shape[0]), redundant)
        tab.T = tab.T[keep]
        tab.rhs = tab.rhs[keep]
        tab.basis = tab.basis[keep]


def enumerate_polygon_optimum(
    vertices: Sequence[Sequence[float]], objective: Sequence[float]
) -> tuple[float, ...]:
    """Vertex minimizing a linear objective; the earliest vertex wins ties."""
    return tuple(vertices[best_vertex_index(vertices, objective)])


def best_vertex_index(vertices: Sequence[Sequence[float]], objective: Sequence[float]) -> int:
    if len(vertices) == 0:
        raise InvalidInput("vertex list is empty")
    best, best_cost = 0, None
    for j, v in enumerate(vertices):
        cost = sum(w * coord for w, coord in zip(objective, v))
        if best_cost is None or cost < best_cost - 1e-12 * max(1.0, abs(best_cost)):
            best, best_cost = j, cost
    return best
