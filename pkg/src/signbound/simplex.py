"""Dense two-phase revised simplex for small LPs with many inequality rows.

Problems have the shape

    minimize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x free,

with few variables (tens) and many rows (thousands).  They are solved
through the dual  min b.y  s.t.  A^T y = -c,  y >= 0,  whose basis is only
as large as the number of primal variables.  The primal solution is read
off the optimal simplex multipliers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LpResult", "LpSolverError", "solve_lp"]

OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT = "optimal", "infeasible", "unbounded", "iteration_limit"


class LpSolverError(RuntimeError):
    """Numerical breakdown inside the simplex (singular basis and the like)."""


@dataclass(frozen=True)
class LpResult:
    status: str
    x: np.ndarray | None
    fun: float
    iterations: int
    message: str = ""


def _simplex(A, rhs, cost, basis, allowed, maxiter, tol_d=1e-10, tol_piv=1e-9):
    """Revised simplex on min cost.y, A y = rhs, y >= 0 from a feasible ``basis``.

    Dantzig pricing; after a run of degenerate pivots Bland's rule takes
    over until the objective moves again.  Returns (status, basis, y_B, pi, its).
    """
    basis = list(basis)
    stall, bland, last_obj = 0, False, np.inf
    for it in range(maxiter):
        B = A[:, basis]
        try:
            xb = np.linalg.solve(B, rhs)
            pi = np.linalg.solve(B.T, cost[basis])
        except np.linalg.LinAlgError as exc:
            raise LpSolverError(f"singular basis at iteration {it}") from exc
        xb = np.maximum(xb, 0.0)
        obj = float(cost[basis] @ xb)
        if obj < last_obj - 1e-12 * max(1.0, abs(obj)):
            stall, bland = 0, False
            last_obj = obj
        else:
            stall += 1
            if stall > 50:
                bland = True
        d = cost - pi @ A
        d[basis] = 0.0
        d[~allowed] = 0.0
        cand = np.flatnonzero(d < -tol_d)
        if cand.size == 0:
            return OPTIMAL, basis, xb, pi, it
        q = int(cand[0]) if bland else int(cand[np.argmin(d[cand])])
        u = np.linalg.solve(B, A[:, q])
        pos = np.flatnonzero(u > tol_piv)
        if pos.size == 0:
            return UNBOUNDED, basis, xb, pi, it
        ratios = xb[pos] / u[pos]
        rmin = ratios.min()
        ties = pos[ratios <= rmin + 1e-12 * max(1.0, rmin)]
        if bland:
            leave = int(min(ties, key=lambda i: basis[i]))
        else:
            leave = int(ties[np.argmax(u[ties])])
        basis[leave] = q
    return ITERATION_LIMIT, basis, None, None, maxiter


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, maxiter: int = 20000) -> LpResult:
    """Minimize c.x over free x subject to A_ub x <= b_ub and A_eq x = b_eq."""
    c = np.asarray(c, dtype=float)
    n = c.size
    rows, rhs_rows = [], []
    if A_ub is not None:
        rows.append(np.asarray(A_ub, dtype=float).reshape(-1, n))
        rhs_rows.append(np.asarray(b_ub, dtype=float).ravel())
    if A_eq is not None:
        Ae = np.asarray(A_eq, dtype=float).reshape(-1, n)
        be = np.asarray(b_eq, dtype=float).ravel()
        rows += [Ae, -Ae]
        rhs_rows += [be, -be]
    if not rows:
        raise ValueError("no constraints given")
    A = np.vstack(rows)
    b = np.concatenate(rhs_rows)

    # dual in standard form: D y = r with D = A^T (n x M), y >= 0, cost b
    D = A.T.copy()
    r = -c.copy()
    sign = np.where(r < 0, -1.0, 1.0)
    D *= sign[:, None]
    r *= sign
    M = D.shape[1]
    full = np.hstack((D, np.eye(n)))
    allowed = np.ones(M + n, dtype=bool)

    # phase I
    cost1 = np.concatenate((np.zeros(M), np.ones(n)))
    status, basis, xb, _, it1 = _simplex(full, r, cost1, range(M, M + n), allowed, maxiter)
    if status == ITERATION_LIMIT:
        return LpResult(ITERATION_LIMIT, None, np.nan, it1, "phase I iteration limit")
    infeas = float(np.sum(xb[np.array(basis) >= M]))
    if infeas > 1e-9 * max(1.0, float(np.abs(r).max())):
        # the dual has no feasible point: the primal is unbounded (or infeasible)
        return LpResult(UNBOUNDED, None, -np.inf, it1, f"dual infeasible (phase I optimum {infeas:.3e})")

    # drive artificials out of the basis where possible
    B = full[:, basis]
    for pos in range(n):
        if basis[pos] < M:
            continue
        row = np.linalg.solve(B.T, np.eye(n)[pos])
        alpha_row = row @ full
        alpha_row[basis] = 0.0
        alpha_row[M:] = 0.0
        j = int(np.argmax(np.abs(alpha_row)))
        if abs(alpha_row[j]) > 1e-9:
            basis[pos] = j
            B = full[:, basis]
    allowed[M:] = False
    cost2 = np.concatenate((b, np.zeros(n)))
    status, basis, xb, pi, it2 = _simplex(full, r, cost2, basis, allowed, maxiter)
    its = it1 + it2
    if status == UNBOUNDED:
        return LpResult(INFEASIBLE, None, np.inf, its, "dual unbounded: primal infeasible")
    if status == ITERATION_LIMIT:
        return LpResult(ITERATION_LIMIT, None, np.nan, its, "phase II iteration limit")
    x = pi * sign
    return LpResult(OPTIMAL, x, float(c @ x), its)
