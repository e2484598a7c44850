"""Check the L^2 <= (2/e)^{d/2} L^1 x L^1 inequality link by link on concrete functions.

The chain for p = p_theta is

    ||f||_2^2 <= ||f||_p ||f||_p*                      (Holder)
    ||f||_p*  <= C_p^d ||f^||_p                       (Hausdorff-Young, applied to f^)
    ||g||_p   <= ||g||_1^(1-theta) ||g||_2^theta       (log-convexity, g = f and f^)

which composes to ratio <= B^{d / (2 (1 - theta))} with B = p^{1/p} / p*^{1/p*}.
Each link is reported as a relative residual (lhs - rhs) / rhs, so a
nonpositive residual means the link holds.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import bounds
from .radial import EigenExpansion, _partition, norm_sup

__all__ = [
    "ChainReport",
    "LAWS",
    "DEFAULT_THETAS",
    "RESIDUAL_TOL",
    "ratio",
    "verify_main",
    "verify_holder",
    "verify_hausdorff_young",
    "verify_logconvexity",
    "verify_combined",
    "composed_bound",
    "random_expansion",
    "verify_batch",
    "reports_to_jsonl",
    "reports_to_csv",
]

LAWS = ("normal", "decaying", "sparse")
DEFAULT_THETAS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)
RESIDUAL_TOL = 1e-9


def _require_nonzero(f: EigenExpansion) -> EigenExpansion:
    if not isinstance(f, EigenExpansion):
        raise TypeError(f"expected EigenExpansion, got {type(f).__name__}")
    if f.is_zero():
        raise ValueError("the zero function has no ratio")
    return f


def _norm(f: EigenExpansion, p: float) -> float:
    if math.isinf(p):
        return norm_sup(f)
    return _partition(f).lp(p)


def _conjugate(p: float) -> float:
    return math.inf if p == 1.0 else p / (p - 1.0)


def _check_p(p: float) -> float:
    p = float(p)
    if not 1.0 <= p <= 2.0:
        raise ValueError(f"p must lie in [1, 2], got {p!r}")
    return p


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta!r}")
    return theta


def _rel(lhs: float, rhs: float) -> float:
    if lhs == rhs:
        return 0.0
    return (lhs - rhs) / rhs


def ratio(f: EigenExpansion) -> float:
    """||f||_2^2 / (||f||_1 ||f^||_1)."""
    f = _require_nonzero(f)
    return _norm(f, 2.0) ** 2 / (_norm(f, 1.0) * _norm(f.fourier(), 1.0))


def verify_holder(f: EigenExpansion, p: float) -> float:
    """Relative residual of ||f||_2^2 <= ||f||_p ||f||_p*."""
    f = _require_nonzero(f)
    p = _check_p(p)
    lhs = _norm(f, 2.0) ** 2
    rhs = _norm(f, p) * _norm(f, _conjugate(p))
    return _rel(lhs, rhs)


def verify_hausdorff_young(f: EigenExpansion, p: float) -> float:
    """Relative residual of ||f^||_p* <= C_p^d ||f||_p."""
    f = _require_nonzero(f)
    p = _check_p(p)
    lhs = _norm(f.fourier(), _conjugate(p))
    rhs = bounds.hy_constant(p, f.dim) * _norm(f, p)
    return _rel(lhs, rhs)


def verify_logconvexity(f: EigenExpansion, theta: float) -> float:
    """Worst relative residual of ||g||_p <= ||g||_1^(1-theta) ||g||_2^theta over g = f, f^."""
    f = _require_nonzero(f)
    theta = _check_theta(theta)
    p = bounds.p_theta(theta)
    worst = -math.inf
    for g in (f, f.fourier()):
        rhs = _norm(g, 1.0) ** (1.0 - theta) * _norm(g, 2.0) ** theta
        worst = max(worst, _rel(_norm(g, p), rhs))
    return worst


def verify_combined(f: EigenExpansion, theta: float) -> float:
    """Relative residual of ||f||_p ||f^||_p <= C(theta)^d ||f||_1 ||f^||_1 at p = p_theta."""
    f = _require_nonzero(f)
    theta = _check_theta(theta)
    p = bounds.p_theta(theta)
    fh = f.fourier()
    lhs = _norm(f, p) * _norm(fh, p)
    rhs = bounds.c_theta(theta) ** f.dim * _norm(f, 1.0) * _norm(fh, 1.0)
    return _rel(lhs, rhs)


def composed_bound(theta: float, d: int) -> float:
    """B^{d / (2 (1 - theta))}: what the three links give at a fixed theta < 1."""
    theta = _check_theta(theta)
    if theta >= 1.0:
        return math.exp(bounds.theorem2_constant(d))
    p = bounds.p_theta(theta)
    return bounds.hy_constant(p, d) ** (1.0 / (1.0 - theta))


@dataclass(frozen=True)
class ChainReport:
    dim: int
    ratio: float
    bound: float
    slack: float
    holder_ok: bool
    holder_residual: float
    hy_ok: bool
    hy_residual: float
    logconvex_ok: bool
    logconvex_residual: float
    combined_ok: bool
    combined_residual: float
    composed_ok: bool
    theta: float

    @property
    def passed(self) -> bool:
        return self.holder_ok and self.hy_ok and self.logconvex_ok and self.combined_ok and self.composed_ok

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def csv_header() -> list[str]:
        return list(ChainReport.__dataclass_fields__)


def verify_main(f: EigenExpansion, thetas=DEFAULT_THETAS, tol: float = RESIDUAL_TOL) -> ChainReport:
    """Ratio against (2/e)^{d/2}, plus every link of the chain at each theta.

    Residual fields hold the worst value over ``thetas``; ``theta`` is the
    value at which the combined inequality came closest to failing.
    """
    f = _require_nonzero(f)
    d = f.dim
    r = ratio(f)
    bound = math.exp(bounds.theorem2_constant(d))
    worst = {"holder": -math.inf, "hy": -math.inf, "logconvex": -math.inf, "combined": -math.inf}
    composed_ok = True
    theta_star = float(thetas[0]) if len(thetas) else 0.5
    for theta in thetas:
        p = bounds.p_theta(theta)
        worst["holder"] = max(worst["holder"], verify_holder(f, p))
        worst["hy"] = max(worst["hy"], verify_hausdorff_young(f, p))
        worst["logconvex"] = max(worst["logconvex"], verify_logconvexity(f, theta))
        c = verify_combined(f, theta)
        if c >= worst["combined"]:
            worst["combined"], theta_star = c, float(theta)
        cb = composed_bound(theta, d)
        composed_ok &= r <= cb * (1.0 + tol) and cb >= bound * (1.0 - tol)
    return ChainReport(
        dim=d,
        ratio=r,
        bound=bound,
        slack=bound - r,
        holder_ok=worst["holder"] <= tol,
        holder_residual=worst["holder"],
        hy_ok=worst["hy"] <= tol,
        hy_residual=worst["hy"],
        logconvex_ok=worst["logconvex"] <= tol,
        logconvex_residual=worst["logconvex"],
        combined_ok=worst["combined"] <= tol and r <= bound * (1.0 + tol),
        combined_residual=worst["combined"],
        composed_ok=bool(composed_ok),
        theta=theta_star,
    )


def random_expansion(seed, d: int, N: int, law: str = "normal") -> EigenExpansion:
    """Random f = sum_{k<=N} a_k psi_k.

    Laws: ``normal`` a_k ~ N(0, 1); ``decaying`` a_k ~ N(0, 4^{-k});
    ``sparse`` a few randomly placed N(0, 1) entries.  ``seed`` is anything
    numpy's SeedSequence accepts, e.g. an int or a tuple of ints.
    """
    if law not in LAWS:
        raise ValueError(f"unknown law {law!r}; choose from {LAWS}")
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N!r}")
    rng = np.random.default_rng(seed)
    n = N + 1
    while True:
        if law == "normal":
            a = rng.standard_normal(n)
        elif law == "decaying":
            a = rng.standard_normal(n) * 2.0 ** -np.arange(n)
        else:
            a = np.zeros(n)
            k = rng.integers(1, max(1, n // 3) + 1)
            idx = rng.choice(n, size=k, replace=False)
            a[idx] = rng.standard_normal(k)
        if np.any(a):
            return EigenExpansion(d, a)


def verify_batch(seed: int, d: int, count: int, law: str = "normal", N: int = 8, threads: int = 1):
    """Yield (index, f, report) for ``count`` random expansions, in index order."""
    law_id = LAWS.index(law)

    def work(i):
        f = random_expansion((seed, d, law_id, i), d, N, law)
        return i, f, verify_main(f)

    if threads <= 1:
        for i in range(count):
            yield work(i)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(work, range(count))


def reports_to_jsonl(rows) -> str:
    """One JSON object per line: index, coefficients and the report."""
    out = io.StringIO()
    for i, f, rep in rows:
        out.write(json.dumps({"index": i, "function": f.to_dict(), "report": rep.to_dict()}, sort_keys=True))
        out.write("\n")
    return out.getvalue()


def reports_to_csv(reports) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(ChainReport.csv_header())
    for rep in reports:
        w.writerow([repr(v) if isinstance(v, float) else v for v in rep.to_dict().values()])
    return out.getvalue()
