"""Small dense linear programs: a two-phase tableau simplex with Bland's rule.

Only meant for the tiny programs that appear here (tens of variables), where
exactness and reproducibility matter more than speed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .errors import SolverError
from .mechanisms import EconParams
from .prob_model import SignalModel, count_distribution

PIVOT_TOL = 1e-10
CERTIFY_TOL = 1e-8


class LpStatus(str, enum.Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"
    UNBOUNDED = "UNBOUNDED"


@dataclass
class LinearProgram:
    """minimize ``objective @ x`` subject to ``A @ x >= b`` and ``lo <= x <= hi``."""

    objective: np.ndarray
    A: np.ndarray
    b: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        n = len(self.objective)
        self.A = np.asarray(self.A, dtype=float).reshape(-1, n)
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        self.lo = np.broadcast_to(np.asarray(self.lo, dtype=float), (n,)).copy()
        self.hi = np.broadcast_to(np.asarray(self.hi, dtype=float), (n,)).copy()
        if len(self.b) != self.A.shape[0]:
            raise ValueError("A and b disagree on the number of constraints")
        if np.any(self.lo > self.hi):
            raise ValueError("lower bound above upper bound")
        if not (np.all(np.isfinite(self.lo)) and np.all(np.isfinite(self.hi))):
            raise ValueError("bounds must be finite")

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    @property
    def n_constraints(self) -> int:
        return self.A.shape[0]

    def slack(self, x) -> np.ndarray:
        return self.A @ np.asarray(x) - self.b


@dataclass
class LpSolution:
    status: LpStatus
    x: Optional[np.ndarray] = None
    objective_value: Optional[float] = None
    duals: Optional[np.ndarray] = None
    diagnostics: Dict[str, float] = field(default_factory=dict)


def build_rsus_lp(model: SignalModel, econ: EconParams, n: int) -> LinearProgram:
    """Minimum-workload uniform policy subject to the lazy-deviation constraints.

    Variables are x(0..n).  For each k < n::

        -P_ab x(k+1) + P_bb x(k) >= c/R
         P_aa x(k+1) - P_ab x(k) >= c/R

    The zero-right-hand-side misreport constraints are implied and left out.
    """
    g = econ.ratio
    A = np.zeros((2 * n, n + 1))
    for k in range(n):
        A[2 * k, k + 1] = -model.P_ab
        A[2 * k, k] = model.P_bb
        A[2 * k + 1, k + 1] = model.P_aa
        A[2 * k + 1, k] = -model.P_ab
    return LinearProgram(count_distribution(model, n).probs, A, np.full(2 * n, g), 0.0, 1.0)


class _Tableau:
    def __init__(self, M, rhs, basis):
        self.M = M
        self.rhs = rhs
        self.basis = basis

    def pivot(self, row, col):
        piv = self.M[row, col]
        if abs(piv) < PIVOT_TOL:
            raise SolverError(f"pivot {piv:.3e} below tolerance at row {row}, col {col}")
        self.M[row] /= piv
        self.rhs[row] /= piv
        for r in range(self.M.shape[0]):
            if r != row and self.M[r, col] != 0.0:
                f = self.M[r, col]
                self.M[r] -= f * self.M[row]
                self.rhs[r] -= f * self.rhs[row]
        self.basis[row] = col

    def reduced_costs(self, cost):
        cb = cost[self.basis]
        return cost - cb @ self.M

    def run(self, cost, allowed, max_iter=10_000):
        """Bland's rule: lowest-index improving column, lowest-index tie-break on rows."""
        for _ in range(max_iter):
            d = self.reduced_costs(cost)
            entering = next((j for j in np.flatnonzero(allowed) if d[j] < -PIVOT_TOL), None)
            if entering is None:
                return LpStatus.OPTIMAL
            col = self.M[:, entering]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if len(rows) == 0:
                return LpStatus.UNBOUNDED
            ratios = self.rhs[rows] / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + PIVOT_TOL]
            leave = min(ties, key=lambda r: self.basis[r])
            self.pivot(leave, entering)
        raise SolverError("simplex did not converge")


def solve(lp: LinearProgram) -> LpSolution:
    """Two-phase primal simplex on the shifted, slack-augmented program."""
    n, m = lp.n_vars, lp.n_constraints
    width = lp.hi - lp.lo
    # y = x - lo >= 0;  A y - s = b - A lo;  y + u = width
    rows_a = np.hstack([lp.A, -np.eye(m), np.zeros((m, n))])
    rows_u = np.hstack([np.eye(n), np.zeros((n, m)), np.eye(n)])
    M = np.vstack([rows_a, rows_u])
    rhs = np.concatenate([lp.b - lp.A @ lp.lo, width])
    neg = rhs < 0
    M[neg] *= -1
    rhs[neg] *= -1
    n_struct = M.shape[1]
    n_rows = M.shape[0]
    M = np.hstack([M, np.eye(n_rows)])
    art = np.arange(n_struct, n_struct + n_rows)
    tab = _Tableau(M, rhs.copy(), list(art))

    phase1 = np.zeros(M.shape[1])
    phase1[art] = 1.0
    allowed = np.ones(M.shape[1], dtype=bool)
    status = tab.run(phase1, allowed)
    infeas = float(phase1[tab.basis] @ tab.rhs)
    if status != LpStatus.OPTIMAL:
        raise SolverError("phase one cannot be unbounded")
    if infeas > 1e-9:
        return LpSolution(LpStatus.INFEASIBLE, diagnostics={"phase1_objective": infeas})

    # drive artificials out of the basis; rows that cannot be pivoted are redundant
    keep = []
    for r in range(n_rows):
        if tab.basis[r] >= n_struct:
            cols = np.flatnonzero(np.abs(tab.M[r, :n_struct]) > PIVOT_TOL)
            if len(cols):
                tab.pivot(r, cols[0])
                keep.append(r)
        else:
            keep.append(r)
    tab = _Tableau(tab.M[keep][:, :n_struct], tab.rhs[keep], [tab.basis[r] for r in keep])

    cost = np.concatenate([lp.objective, np.zeros(n_struct - n)])
    allowed = np.ones(n_struct, dtype=bool)
    status = tab.run(cost, allowed)
    if status == LpStatus.UNBOUNDED:
        return LpSolution(LpStatus.UNBOUNDED)

    z = np.zeros(n_struct)
    z[tab.basis] = tab.rhs
    z = np.maximum(z, 0.0)
    x = z[:n] + lp.lo
    diag = _certify(lp, x, tab, cost)
    duals = diag.pop("_duals")
    value = float(lp.objective @ x)
    if max(diag.values()) > CERTIFY_TOL:
        raise SolverError(f"optimality certificate failed: {diag}")
    return LpSolution(LpStatus.OPTIMAL, x, value, duals, diag)


def _certify(lp, x, tab, cost):
    """Recompute residuals from scratch using the original data.

    Duals ``y >= 0`` for ``A x >= b`` are recovered from the final reduced
    costs of the surplus columns.
    """
    n, m = lp.n_vars, lp.n_constraints
    d = tab.reduced_costs(cost)
    # reduced cost of surplus s_i is y_i (since its column is -e_i)
    y = d[n:n + m]
    # reduced cost of upper slack u_j is w_j >= 0 (multiplier on x_j <= hi_j)
    w = d[n + m:n + m + n]
    primal = max(
        float(np.max(np.maximum(lp.b - lp.A @ x, 0.0), initial=0.0)),
        float(np.max(np.maximum(lp.lo - x, 0.0))),
        float(np.max(np.maximum(x - lp.hi, 0.0))),
    )
    # stationarity: c - A^T y + w - v = 0 with v >= 0 on lower bounds
    v = lp.objective - lp.A.T @ y + w
    dual = max(
        float(np.max(np.maximum(-y, 0.0), initial=0.0)),
        float(np.max(np.maximum(-w, 0.0), initial=0.0)),
        float(np.max(np.maximum(-v, 0.0), initial=0.0)),
    )
    slack = lp.A @ x - lp.b
    comp = max(
        float(np.max(np.abs(y * slack), initial=0.0)),
        float(np.max(np.abs(w * (lp.hi - x)), initial=0.0)),
        float(np.max(np.abs(v * (x - lp.lo)), initial=0.0)),
    )
    return {
        "primal_residual": primal,
        "dual_residual": dual,
        "complementary_slackness": comp,
        "_duals": y,
    }
