"""Closed-form constants for the L^2 / (L^1 x L^1) inequality and the sign uncertainty bounds.

Quantities that overflow or underflow for large d are returned as natural
logarithms; the ``*_value`` helpers exponentiate at the reporting boundary.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .numerics import log_gamma, log_unit_ball_volume

__all__ = [
    "BoundsReport",
    "KL_EXPONENT",
    "INV_TWO_SQRT_PI",
    "SQRT_TWO_OVER_E",
    "theorem2_constant",
    "a_lower",
    "log_a_lower",
    "threshold_check",
    "delta_lp_lower",
    "delta_lp_lower_via_ball",
    "delta_lp_from_wd",
    "hy_constant",
    "p_theta",
    "c_theta",
    "kl_wd_lower",
    "bounds_report",
]

# Kabatiansky-Levenshtein exponent, truncated to the three digits usually quoted.
KL_EXPONENT = 0.599
INV_TWO_SQRT_PI = 1.0 / (2.0 * math.sqrt(math.pi))
SQRT_TWO_OVER_E = math.sqrt(2.0 / math.e)

_C_THETA_SERIES_SWITCH = 1.0 - 1e-4


def _dim(d) -> int:
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


def theorem2_constant(d: int) -> float:
    """ln (2/e)^{d/2}."""
    return 0.5 * _dim(d) * (math.log(2.0) - 1.0)


def log_a_lower(d: int) -> float:
    d = _dim(d)
    return 0.5 * (1.0 - math.log(2.0 * math.pi)) + (log_gamma(0.5 * d + 1.0) - math.log(4.0)) / d


def a_lower(d: int) -> float:
    """Lower bound sqrt(e / 2 pi) (Gamma(d/2 + 1) / 4)^{1/d} for the sign uncertainty constants."""
    return math.exp(log_a_lower(d))


def threshold_check(d: int) -> bool:
    """True iff a_lower(d) >= sqrt(d) / (2 sqrt(pi)); compared in log-space."""
    d = _dim(d)
    return log_a_lower(d) >= 0.5 * math.log(d) + math.log(INV_TWO_SQRT_PI)


def delta_lp_lower(d: int) -> float:
    """ln of the floor (1/4)(e/8)^{d/2} on the linear programming bound."""
    d = _dim(d)
    return math.log(0.25) + 0.5 * d * (1.0 - math.log(8.0))


def delta_lp_lower_via_ball(d: int) -> float:
    """Same floor, computed as ln(|B_1| (a_lower / 2)^d)."""
    d = _dim(d)
    return log_unit_ball_volume(d) + d * (log_a_lower(d) - math.log(2.0))


def delta_lp_from_wd(w: float, d: int) -> float:
    """(1/4) 2^{-d} / w: the LP floor implied by a value w of the ratio supremum."""
    d = _dim(d)
    if not w > 0:
        raise ValueError(f"w must be positive, got {w!r}")
    if math.isinf(w):
        return 0.0
    return math.exp(math.log(0.25) - d * math.log(2.0) - math.log(w))


def _conjugate(p: float) -> float:
    return math.inf if p == 1.0 else p / (p - 1.0)


def hy_constant(p: float, d: int) -> float:
    """Sharp Hausdorff-Young constant (p^{1/p} / p*^{1/p*})^{d/2} for 1 <= p <= 2."""
    d = _dim(d)
    if not 1.0 <= p <= 2.0:
        raise ValueError(f"p must lie in [1, 2], got {p!r}")
    q = _conjugate(p)
    log_ratio = math.log(p) / p - (0.0 if math.isinf(q) else math.log(q) / q)
    return math.exp(0.5 * d * log_ratio)


def p_theta(theta: float) -> float:
    """Interpolation exponent with 1/p = 1 - theta/2."""
    return 2.0 / (2.0 - theta)


def _log_ratio_theta(theta: float) -> float:
    # ln(p^{1/p} / p*^{1/p*}) at p = p_theta
    a = 0.5 * theta * (math.log(theta) - math.log(2.0)) if theta > 0 else 0.0
    b = 0.5 * (2.0 - theta) * math.log(0.5 * (2.0 - theta))
    return a - b


def c_theta(theta: float) -> float:
    """Per-dimension factor of the interpolated L^{p_theta} product bound.

    C(theta) = (p^{1/p} / p*^{1/p*})^{theta / (2 (1 - theta))} with p = p_theta.
    Near theta = 1 the 0/0 form is replaced by its Taylor expansion, and
    C(1) is the limit sqrt(2/e).
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta!r}")
    if theta > _C_THETA_SERIES_SWITCH:
        eps = theta - 1.0
        # ln ratio / (theta - 1) = (1 - ln 2) - eps^2/6 - eps^4/20 + O(eps^6)
        slope = (1.0 - math.log(2.0)) - eps * eps / 6.0 - eps**4 / 20.0
        return math.exp(-0.5 * theta * slope)
    return math.exp(_log_ratio_theta(theta) * theta / (2.0 * (1.0 - theta)))


def kl_wd_lower(d: int) -> float:
    """Asymptotic-only lower bound 2^{(0.599 - 1) d} for the ratio supremum (o(1) dropped)."""
    d = _dim(d)
    return 2.0 ** ((KL_EXPONENT - 1.0) * d)


@dataclass(frozen=True)
class BoundsReport:
    dim: int
    log_theorem2_constant: float
    theorem2_constant: float
    a_lower: float
    a_lower_over_sqrt_d: float
    log_delta_lp_lower: float
    delta_lp_lower: float
    log_unit_ball_volume: float
    threshold_ok: bool

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def csv_header() -> list[str]:
        return list(BoundsReport.__dataclass_fields__)

    def csv_row(self) -> list:
        return [getattr(self, k) for k in self.csv_header()]


def bounds_report(d: int) -> BoundsReport:
    d = _dim(d)
    a = a_lower(d)
    lt = theorem2_constant(d)
    ld = delta_lp_lower(d)
    return BoundsReport(
        dim=d,
        log_theorem2_constant=lt,
        theorem2_constant=math.exp(lt),
        a_lower=a,
        a_lower_over_sqrt_d=a / math.sqrt(d),
        log_delta_lp_lower=ld,
        delta_lp_lower=math.exp(ld),
        log_unit_ball_volume=log_unit_ball_volume(d),
        threshold_ok=threshold_check(d),
    )
