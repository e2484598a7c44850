"""Cohn-Elkies linear program over the truncated eigenbasis.

An auxiliary function f = sum_k a_k psi_k with

    f(0) = f^(0) > 0,   f(r) <= 0 for r >= r0,   f^ >= 0 everywhere

bounds the sphere packing density by |B_1| (r0/2)^d.  Feasibility at a
given r0 is decided by one LP in the orthonormal coefficients c plus a slack
s, minimizing s subject to

    row(r) . c <= s   for grid radii r >= r0        (f side)
   -row^(r) . c <= s  for all grid radii             (f^ side)

where row(r) is the vector of orthonormal polynomials at t = 2 pi r^2,
scaled to unit length so that every constraint is measured on the same
footing.  s* <= 0 means feasible.  Grid violations are fed back into the
constraint set (an exchange method) until a dense check grid and the exact
sign-change structure of f and f^ are clean; the result is then validated
on an independent grid.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from . import bounds
from .numerics import laguerre_functions, log_unit_ball_volume
from .radial import TWO_PI, EigenExpansion, _root_bound, default_rule, sign_change_roots
from .sign import last_sign_change
from .simplex import OPTIMAL, INFEASIBLE, LpSolverError, solve_lp

__all__ = [
    "LpCertificate",
    "Infeasible",
    "AuditReport",
    "BracketError",
    "LpSolverError",
    "feasible_at",
    "minimal_r",
    "audit",
    "tail_radius",
    "certificates_to_csv",
    "CERT_TOL",
    "AUDIT_RTOL",
]

CERT_TOL = 1e-9          # certificate invariants, relative to f(0)
AUDIT_RTOL = 2e-9        # depth below which a sign excursion counts as a numerical tangency
FEAS_TOL = 1e-11         # LP optimum (unit-row units) at or below this counts as feasible
EXCHANGE_TOL = 1e-12
TAIL_EPS = 1e-12
BOX = 1e3
MAX_EXCHANGE_ROUNDS = 40
DEFAULT_GRID_DENSITY = 16


class BracketError(RuntimeError):
    """The bisection seeds do not bracket the minimal radius."""


@dataclass(frozen=True)
class Infeasible:
    """No admissible function at this radius (LP optimum ``objective`` > 0)."""

    r0: float
    objective: float

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class LpCertificate:
    dim: int
    degree: int
    r_star: float
    coeffs: list
    log_density_bound: float
    density_bound: float
    grid: list
    residuals: dict
    status: str
    objective: float = 0.0
    r_tail: float = 0.0

    @property
    def function(self) -> EigenExpansion:
        return EigenExpansion(self.dim, self.coeffs)

    @property
    def floor(self) -> float:
        return math.exp(bounds.delta_lp_lower(self.dim))

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "r_star": self.r_star,
            "coeffs": [float(a) for a in self.coeffs],
            "log_density_bound": self.log_density_bound,
            "density_bound": self.density_bound,
            "grid": [float(r) for r in self.grid],
            "residuals": dict(self.residuals),
            "status": self.status,
            "objective": self.objective,
            "r_tail": self.r_tail,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "LpCertificate":
        return cls(**d)

    @classmethod
    def from_json(cls, s: str) -> "LpCertificate":
        return cls.from_dict(json.loads(s))

    def csv_row(self) -> list:
        return [self.dim, self.degree, repr(self.r_star), repr(self.density_bound), repr(self.floor),
                repr(self.density_bound - self.floor), self.status]


CSV_HEADER = ["d", "N", "r_star", "density_bound", "floor", "slack", "status"]


def certificates_to_csv(certs) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in certs:
        w.writerow(c.csv_row())
    return out.getvalue()


# ---------------------------------------------------------------------------
# grids and constraint rows
# ---------------------------------------------------------------------------


def _alpha(d: int) -> float:
    return 0.5 * d - 1.0


def _unit_rows(d: int, n: int, r) -> np.ndarray:
    """Orthonormal polynomials p_k(2 pi r^2), k < n, each row scaled to unit length.

    The common factor per radius is irrelevant after scaling, so the
    recurrence is rescaled freely and never under- or overflows.
    """
    t = TWO_PI * np.atleast_1d(np.asarray(r, dtype=float)) ** 2
    alpha = _alpha(d)
    out = np.empty((t.size, n))
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    out[:, 0] = cur
    for k in range(n - 1):
        nxt = ((2 * k + 1 + alpha - t) * cur - math.sqrt(k * (k + alpha)) * prev) / math.sqrt(
            (k + 1) * (k + alpha + 1))
        prev, cur = cur, nxt
        out[:, k + 1] = cur
        big = np.abs(cur) > 1e100
        if big.any():
            sc = np.abs(cur[big])
            out[big, : k + 2] /= sc[:, None]
            cur[big] /= sc
            prev[big] /= sc
    return out / np.linalg.norm(out, axis=1, keepdims=True)


def _flip(n: int) -> np.ndarray:
    return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)


def _chebyshev(a: float, b: float, m: int) -> np.ndarray:
    k = np.arange(m)
    return a + 0.5 * (b - a) * (1.0 - np.cos(math.pi * k / max(m - 1, 1)))


def _base_radius(d: int, N: int, r0: float) -> float:
    # past the oscillatory region of psi_N, and a few units beyond r0
    return max(math.sqrt((4.0 * N + 2.0 * abs(_alpha(d)) + 30.0) / TWO_PI) + 2.0, r0 + 3.0)


def tail_radius(f: EigenExpansion, eps: float = TAIL_EPS) -> float:
    """Radius beyond which |f| < eps * |f(0)|, from |L_k^a(t)| <= sum_j |C(k+a, k-j)| t^j / j!."""
    a = np.asarray(f.coeffs, dtype=float)
    alpha = f.alpha
    f0 = abs(f.value_at_zero()) or 1.0
    k = np.arange(a.size)

    def log_bound(t):
        # log of e^{-t/2} sum_k |a_k| sum_j |binom(k+alpha, k-j)| t^j / j!
        terms = []
        for kk in k:
            if a[kk] == 0.0:
                continue
            j = np.arange(kk + 1)
            lb = gammaln(kk + alpha + 1.0) - gammaln(kk - j + 1.0) - gammaln(alpha + j + 1.0)
            # |binom| for alpha + j + 1 > 0 is exp(lb); all arguments are positive here
            terms.append(math.log(abs(a[kk])) + lb + j * math.log(max(t, 1e-300)) - gammaln(j + 1.0))
        allt = np.concatenate(terms)
        m = allt.max()
        return m + math.log(np.exp(allt - m).sum()) - 0.5 * t

    target = math.log(eps * f0)
    t = 1.0
    while log_bound(t) >= target:
        t *= 1.5
        if t > 1e7:
            raise LpSolverError("tail radius search diverged")
    lo, hi = t / 1.5, t
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if log_bound(mid) >= target:
            lo = mid
        else:
            hi = mid
    return math.sqrt(hi / TWO_PI)


def _interval_extrema(d: int, c: np.ndarray, r_lo: float, r_hi: float, flip: bool) -> np.ndarray:
    """Worst point of each sign interval on [r_lo, r_hi], measured on unit rows.

    For the f side (``flip`` False) the worst point maximizes row . c; for
    the transform side it minimizes row^ . c.
    """
    n = c.size
    cc = c * _flip(n) if flip else c
    e = EigenExpansion.from_normalized(d, cc)
    roots = np.sqrt(sign_change_roots(e) / TWO_PI)
    edges = np.unique(np.concatenate(([r_lo], roots[(roots > r_lo) & (roots < r_hi)], [r_hi])))
    x = (edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * np.linspace(0.0, 1.0, 34)[1:-1]).ravel()
    v = (_unit_rows(d, n, x) @ cc).reshape(edges.size - 1, -1)
    idx = np.argmin(v, axis=1) if flip else np.argmax(v, axis=1)
    return x.reshape(edges.size - 1, -1)[np.arange(edges.size - 1), idx]


# ---------------------------------------------------------------------------
# the LP at a fixed radius
# ---------------------------------------------------------------------------


def _solve(d: int, n: int, r_f: np.ndarray, r_h: np.ndarray):
    rows_f = _unit_rows(d, n, r_f)
    rows_h = -_unit_rows(d, n, r_h) * _flip(n)
    A = np.vstack((rows_f, rows_h))
    A = np.hstack((A, -np.ones((A.shape[0], 1))))
    box = np.hstack((np.vstack((np.eye(n), -np.eye(n))), np.zeros((2 * n, 1))))
    s_floor = np.zeros((1, n + 1))
    s_floor[0, -1] = -1.0
    A_ub = np.vstack((A, box, s_floor))
    b_ub = np.concatenate((np.zeros(A.shape[0]), np.full(2 * n, BOX), [1.0]))
    p0 = laguerre_functions(n, _alpha(d), np.array([0.0]))[:, 0]
    A_eq = np.zeros((2, n + 1))
    A_eq[0, :n] = p0
    A_eq[1, 1:n:2] = p0[1::2]
    obj = np.zeros(n + 1)
    obj[-1] = 1.0
    res = solve_lp(obj, A_ub, b_ub, A_eq, [1.0, 0.0])
    if res.status == INFEASIBLE:
        raise LpSolverError("LP reported infeasible although s is unconstrained above")
    if res.status != OPTIMAL:
        raise LpSolverError(f"LP solver failed: {res.status} ({res.message})")
    return res.x[:n], float(res.x[-1])


def _violations(d, n, c, s, r0, r_f_check, r_h_check):
    vf = _unit_rows(d, n, r_f_check) @ c - s
    vh = -(_unit_rows(d, n, r_h_check) * _flip(n)) @ c - s
    return r_f_check[vf > EXCHANGE_TOL], vf, r_h_check[vh > EXCHANGE_TOL], vh


def _pick(r: np.ndarray, v: np.ndarray, mask_pts: np.ndarray, limit: int = 64) -> np.ndarray:
    # strongest violators, preferring local maxima of the violation
    if mask_pts.size == 0:
        return mask_pts
    order = np.argsort(-v)
    chosen = r[order[: min(limit, order.size)]]
    return chosen[v[order[: chosen.size]] > EXCHANGE_TOL]


def _validate(f: EigenExpansion, r_star: float, grid_points: int, r_tail: float) -> dict:
    fh = f.fourier()
    f0 = f.value_at_zero()
    # uniform, offset by half a step, so it shares no points with the LP grids
    h = r_tail / grid_points
    r = (np.arange(grid_points) + 0.5) * h
    fv = f.evaluate(r)
    hv = fh.evaluate(r)
    beyond = r >= r_star
    return {
        "f0_equality": abs(f0 - fh.value_at_zero()) / abs(f0),
        "f_beyond_r": float(max(np.max(fv[beyond], initial=-np.inf) / f0, 0.0)) if beyond.any() else 0.0,
        "fhat_negative": float(max(-np.min(hv) / f0, 0.0)),
        "tail_bound": TAIL_EPS,
        "validation_points": int(grid_points),
    }


def feasible_at(r0: float, d: int, N: int, grid_density: int = DEFAULT_GRID_DENSITY):
    """An LpCertificate if some sum_{k<=N} a_k psi_k satisfies the three conditions at r0.

    Returns :class:`Infeasible` when the LP optimum is positive.  A
    certificate that fails validation on the independent grid is returned
    with status ``"feasible-only"``.
    """
    if not r0 > 0:
        raise ValueError(f"r0 must be positive, got {r0!r}")
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N!r}")
    d = int(d)
    # f <= 0 and f^ >= 0 at infinity need the top nonzero coefficient to have
    # odd index, so for even N the last coefficient is dropped (fixed at zero)
    n = int(N) + 1 if N % 2 == 1 else int(N)
    R = _base_radius(d, N, r0)
    m = max(int(grid_density), 2) * n
    rule = default_rule(d)
    quad_r = np.sqrt(rule.nodes / TWO_PI)
    grid = np.unique(np.concatenate((_chebyshev(0.0, R, m), quad_r[quad_r <= R], [r0])))
    r_f = grid[grid >= r0]
    r_h = grid.copy()

    for _ in range(MAX_EXCHANGE_ROUNDS):
        c, s = _solve(d, n, r_f, r_h)
        if s > FEAS_TOL:
            return Infeasible(r0=float(r0), objective=s)
        f = EigenExpansion.from_normalized(d, c)
        r_ext = max(R, tail_radius(f))
        check = _chebyshev(0.0, r_ext, 10 * m)
        # the exact sign structure supplies the points a grid could straddle
        r_roots = max(r_ext, math.sqrt(_root_bound(f.trimmed()) / TWO_PI)) + 1.0
        ex_f = _interval_extrema(d, c, r0, r_roots, flip=False) if r_roots > r0 else np.empty(0)
        ex_h = _interval_extrema(d, c, 0.0, r_roots, flip=True)
        cf = np.unique(np.concatenate((check[check >= r0], ex_f)))
        ch = np.unique(np.concatenate((check, ex_h)))
        bad_f, vf, bad_h, vh = _violations(d, n, c, s, r0, cf, ch)
        if bad_f.size == 0 and bad_h.size == 0:
            break
        r_f = np.unique(np.concatenate((r_f, _pick(cf, vf, bad_f))))
        r_h = np.unique(np.concatenate((r_h, _pick(ch, vh, bad_h))))
    f = EigenExpansion.from_normalized(d, c)
    r_tail = max(R, tail_radius(f))
    res = _validate(f, r0, 10 * (r_f.size + r_h.size), r_tail)
    ok = (res["f0_equality"] <= CERT_TOL and res["f_beyond_r"] <= CERT_TOL
          and res["fhat_negative"] <= CERT_TOL and f.value_at_zero() > 0)
    res["box_active"] = bool(np.max(np.abs(c)) >= BOX * (1 - 1e-9))
    log_density = log_unit_ball_volume(d) + d * (math.log(r0) - math.log(2.0))
    return LpCertificate(
        dim=d,
        degree=int(N),
        r_star=float(r0),
        coeffs=[float(a) for a in f.coeffs] + [0.0] * (int(N) + 1 - n),
        log_density_bound=log_density,
        density_bound=math.exp(log_density),
        grid=[float(x) for x in np.unique(np.concatenate((r_f, r_h)))],
        residuals=res,
        status="optimal" if ok else "feasible-only",
        objective=s,
        r_tail=float(r_tail),
    )


def _accepted(out) -> bool:
    return isinstance(out, LpCertificate) and out.status == "optimal"


def minimal_r(d: int, N: int, tol: float = 1e-4, grid_density: int = DEFAULT_GRID_DENSITY) -> LpCertificate:
    """Bisect r0 between 2 sqrt(d) (feasible) and a_lower(d)/2 (infeasible) to within ``tol``.

    Only validated certificates count as feasible.  The returned certificate
    sits at the feasible end of the final bracket, so |B_1| (r_star/2)^d is
    an upper bound for the packing density (and for the LP bound itself).
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    hi = 2.0 * math.sqrt(d)
    lo = 0.5 * bounds.a_lower(d)
    at_hi = feasible_at(hi, d, N, grid_density)
    at_lo = feasible_at(lo, d, N, grid_density)
    if not _accepted(at_hi) or _accepted(at_lo):
        raise BracketError(f"seeds do not bracket: r={hi:.6g} -> {_describe(at_hi)}, "
                           f"r={lo:.6g} -> {_describe(at_lo)}")
    best = at_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        out = feasible_at(mid, d, N, grid_density)
        if _accepted(out):
            hi, best = mid, out
        else:
            lo = mid
    return best


def _describe(out) -> str:
    if isinstance(out, LpCertificate):
        return f"{out.status} (objective {out.objective:.3e})"
    return f"infeasible (objective {out.objective:.3e})"


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuditReport:
    ok: bool
    f0_equality: float
    f_beyond_r: float
    fhat_negative: float
    a_minus_f: float
    a_fhat: float
    a_g: float
    g_eventually_nonneg: bool
    density_above_floor: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        for k in ("a_minus_f", "a_fhat", "a_g"):
            if math.isinf(out[k]):
                out[k] = "inf"
        return out


def audit(cert: LpCertificate, refinement: int = 10) -> AuditReport:
    """Re-check a certificate on a ``refinement``-times denser grid and by root isolation.

    Root isolation works on the polynomial factors of f, f^ and g = f^ - f;
    excursions shallower than AUDIT_RTOL * sup|.| are read as numerical
    tangencies, which optimal LP solutions have in abundance.
    """
    f = cert.function
    fh = f.fourier()
    f0 = f.value_at_zero()
    m = max(int(refinement), 1) * max(len(cert.grid), 1)
    r_tail = max(cert.r_tail, tail_radius(f))
    r = np.linspace(0.0, r_tail, m)
    fv = f.evaluate(r)
    hv = fh.evaluate(r)
    beyond = r >= cert.r_star
    f_beyond = float(max(np.max(fv[beyond], initial=-np.inf) / f0, 0.0))
    fh_neg = float(max(-np.min(hv) / f0, 0.0))
    eq = abs(f0 - fh.value_at_zero()) / abs(f0)
    a_mf = last_sign_change(-f, rtol=AUDIT_RTOL).a_radius
    a_fh = last_sign_change(fh, rtol=AUDIT_RTOL).a_radius
    g = fh - f
    rep_g = last_sign_change(g, rtol=AUDIT_RTOL)
    floor_ok = cert.log_density_bound >= bounds.delta_lp_lower(cert.dim) - 1e-9
    ok = (
        f0 > 0
        and eq <= CERT_TOL
        and f_beyond <= CERT_TOL
        and fh_neg <= CERT_TOL
        and a_mf <= cert.r_star + 1e-9
        and a_fh == 0.0
        and rep_g.eventually_nonneg
        and rep_g.a_radius <= cert.r_star + 1e-9
        and floor_ok
    )
    return AuditReport(
        ok=bool(ok),
        f0_equality=eq,
        f_beyond_r=f_beyond,
        fhat_negative=fh_neg,
        a_minus_f=a_mf,
        a_fhat=a_fh,
        a_g=rep_g.a_radius,
        g_eventually_nonneg=rep_g.eventually_nonneg,
        density_above_floor=bool(floor_ok),
        details={"points": int(m), "r_tail": float(r_tail)},
    )
