"""Last sign change A(f), dilation, and the +-1 eigenfunction constructions."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .radial import (
    TWO_PI,
    EigenExpansion,
    RadialProfile,
    ResolutionWarning,
    default_rule,
    project,
    radial_fourier,
    sign_change_roots,
)
from .numerics import laguerre_functions
from .radial import NEGLIGIBLE, _poly_values, _refine_brackets, _root_bound

__all__ = [
    "SignReport",
    "ZeroFunctionError",
    "last_sign_change",
    "dilate",
    "make_minus_eigenfunction",
    "plus_normalize",
    "a_product",
    "PROFILE_RTOL",
]

# Negative excursions smaller than this fraction of sup|f| are treated as
# projection noise when A is computed from sampled profiles.
PROFILE_RTOL = 1e-12


class ZeroFunctionError(ValueError):
    """A is undefined for the zero function (or a construction produced zero)."""


@dataclass(frozen=True)
class SignReport:
    a_radius: float
    sign_changes: list = field(default_factory=list)
    eventually_nonneg: bool = True
    tail_certificate: float = 0.0

    def to_dict(self) -> dict:
        return {
            "a_radius": self.a_radius if math.isfinite(self.a_radius) else "inf",
            "sign_changes": [float(x) for x in self.sign_changes],
            "eventually_nonneg": self.eventually_nonneg,
            "tail_certificate": self.tail_certificate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SignReport":
        a = d["a_radius"]
        return cls(
            a_radius=math.inf if a == "inf" else float(a),
            sign_changes=[float(x) for x in d["sign_changes"]],
            eventually_nonneg=bool(d["eventually_nonneg"]),
            tail_certificate=float(d["tail_certificate"]),
        )


def _report(e: EigenExpansion, rtol: float, r_cap: float, scale: float | None = None) -> SignReport:
    if e.is_zero():
        raise ZeroFunctionError("A undefined for the zero function")
    e = e.trimmed(NEGLIGIBLE)
    roots = np.sqrt(sign_change_roots(e) / TWO_PI)
    if roots.size:
        roots = roots[np.concatenate(([True], np.diff(roots) > 1e-12 * np.maximum(roots[1:], 1.0)))]
    tail_cert = math.sqrt(max(_root_bound(e), 0.0) / TWO_PI)
    # interval i is (edges[i], edges[i + 1]); the last one is unbounded
    edges = np.concatenate(([0.0], roots))
    n_int = edges.size
    tail_hi = max(r_cap, edges[-1] + 1.0) if math.isfinite(r_cap) else edges[-1] + 1.0
    his = np.append(edges[1:], tail_hi)
    frac = np.linspace(0.0, 1.0, 33)[1:-1]
    width = his - edges
    near = np.minimum(width, 1.0)[:, None] * frac
    # evenly spread samples, plus unit windows at both ends for very long intervals
    samples = np.hstack((edges[:, None] + width[:, None] * frac, edges[:, None] + near, his[:, None] - near))
    mins = e.evaluate(samples.ravel()).reshape(samples.shape).min(axis=1)
    if scale is None:
        probe = np.linspace(0.0, tail_hi, 2001)
        scale = float(np.max(np.abs(e.evaluate(probe))))
    negative = mins < -rtol * scale
    if not math.isfinite(r_cap):
        # exact mode trusts the leading coefficient; with a noise threshold the
        # unbounded interval must also dip below it just past the last root
        negative[-1] = e.leading_sign() < 0 and (rtol == 0.0 or negative[-1])
    neg = np.flatnonzero(negative)
    if neg.size == 0:
        a, ev = 0.0, True
    elif neg[-1] == n_int - 1:
        a, ev = math.inf, False
    else:
        a, ev = float(edges[neg[-1] + 1]), True
    return SignReport(a_radius=a, sign_changes=[float(x) for x in roots], eventually_nonneg=ev,
                      tail_certificate=tail_cert)


def _profile_report(e: EigenExpansion, rtol: float, r_cap: float) -> SignReport:
    # Projection noise sits in the coefficients, so at radius r it is of size
    # |c| * (sum_k phi_k(t)^2)^(1/2): the Gaussian damps noise and signal alike.
    # Values inside rtol times that envelope carry no sign; only crossings
    # between significant values count, and the tail is judged up to r_cap.
    c = e.normalized_coeffs
    r = np.linspace(0.0, r_cap, 8193)
    t = TWO_PI * r * r
    v = _poly_values(c, e.alpha, t, damped=True)
    phi = laguerre_functions(c.size, e.alpha, t)
    envelope = np.sqrt(np.einsum("ij,ij->j", phi, phi))
    noise = rtol * float(np.linalg.norm(c)) * envelope
    label = np.where(v > noise, 1, np.where(v < -noise, -1, 0))
    idx = np.flatnonzero(label)
    if idx.size == 0:
        raise ZeroFunctionError("profile vanishes to within the noise threshold")
    flips = np.flatnonzero(label[idx[:-1]] != label[idx[1:]])
    lo, hi = idx[flips], idx[flips + 1]
    pl, ph = _poly_values(c, e.alpha, t[lo]), _poly_values(c, e.alpha, t[hi])
    tr = _refine_brackets(lambda x: _poly_values(c, e.alpha, x), t[lo], t[hi], pl, ph)
    roots = np.sqrt(tr / TWO_PI)
    last = label[idx[-1]]
    if last < 0:
        a, ev = math.inf, False
    else:
        neg_end = np.flatnonzero(label[idx[:-1]][flips] < 0)
        a, ev = (float(roots[neg_end[-1]]) if neg_end.size else 0.0), True
    return SignReport(a_radius=a, sign_changes=[float(x) for x in roots], eventually_nonneg=ev,
                      tail_certificate=float(r_cap))


def last_sign_change(f, rtol: float | None = None) -> SignReport:
    """A(f) = inf{r : f(x) >= 0 for |x| >= r}, with the sign-change structure.

    For expansions the roots of the polynomial factor are isolated exactly
    and the eventual sign is read off the leading coefficient; a positive
    ``rtol`` additionally ignores negative intervals whose depth is below
    ``rtol * sup|f|``.  Profiles are projected onto the eigenbasis and
    scanned on a fine radial grid; values within ``rtol`` (default
    :data:`PROFILE_RTOL`) times the local size of the projection noise carry
    no sign, and the eventual sign is judged on the grid's radial range,
    which is what ``tail_certificate`` then reports.
    """
    if isinstance(f, EigenExpansion):
        return _report(f, 0.0 if rtol is None else rtol, math.inf)
    if isinstance(f, RadialProfile):
        if not np.any(f.values):
            raise ZeroFunctionError("A undefined for the zero function")
        e, _ = project(f)
        return _profile_report(e.trimmed(1e-15), PROFILE_RTOL if rtol is None else rtol, float(f.radii[-1]))
    raise TypeError(f"expected EigenExpansion or RadialProfile, got {type(f).__name__}")


def dilate(f: EigenExpansion, lam: float, order: int | None = None) -> RadialProfile:
    """Sample x -> f(lam x) on the Gauss-Laguerre grid.

    Dilation leaves the eigenbasis, so the result is a profile; project it
    to get back to coefficients.
    """
    if not lam > 0:
        raise ValueError(f"dilation factor must be positive, got {lam!r}")
    rule = default_rule(f.dim, order)
    r = np.sqrt(rule.nodes / TWO_PI)
    return RadialProfile(f.dim, f.evaluate(lam * r), rule)


def _balance_log_lambda(a_f: float, a_mf: float, steps: int = 200) -> float:
    # A(f_lam) = A(f)/lam and A(-F f_lam) = lam A(-F f): bisect their log difference on [-20, 20]
    lo, hi = -20.0, 20.0

    def gap(s):
        return (math.log(a_f) - s) - (math.log(a_mf) + s)

    if gap(lo) < 0 or gap(hi) > 0:
        raise ValueError("balancing dilation outside exp([-20, 20])")
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def make_minus_eigenfunction(f: EigenExpansion, order: int | None = None) -> EigenExpansion:
    """Rescale f so A(f_lam) = A(-F f_lam), then return g = f_lam - F f_lam.

    g is a -1 eigenfunction with A(g) <= A(f_lam) = sqrt(A(f) A(-F f)).
    It is re-projected onto the eigenbasis; even coefficients, which vanish
    up to projection error, are set to zero.
    """
    if f.is_zero():
        raise ZeroFunctionError("A undefined for the zero function")
    if not np.any(f.coeffs[1::2]):
        raise ZeroFunctionError("f is a +1 eigenfunction: f - F f vanishes identically")
    a_f = last_sign_change(f).a_radius
    a_mf = last_sign_change(-f.fourier()).a_radius
    for name, a in (("A(f)", a_f), ("A(-F f)", a_mf)):
        if not (0.0 < a < math.inf):
            raise ValueError(f"{name} = {a}: rescaling target undefined (need 0 < A < inf)")
    lam = math.exp(_balance_log_lambda(a_f, a_mf))
    rule = default_rule(f.dim, order)
    r = np.sqrt(rule.nodes / TWO_PI)
    fh = f.fourier()
    vals = f.evaluate(lam * r) - lam ** (-f.dim) * fh.evaluate(r / lam)
    scale = max(float(np.max(np.abs(f.evaluate(lam * r)))), 1e-300)
    if float(np.max(np.abs(vals))) <= 1e-12 * scale:
        raise ZeroFunctionError("g = f_lam - F f_lam vanishes: f is a +1 eigenfunction shape")
    e, residual = project(RadialProfile(f.dim, vals, rule))
    if residual > 1e-6:
        warnings.warn(f"balanced dilation lam={lam:.4g} poorly resolved (residual {residual:.2e})",
                      ResolutionWarning, stacklevel=2)
    c = e.coeffs.copy()
    c[0::2] = 0.0
    return EigenExpansion(f.dim, c).trimmed(1e-15)


def plus_normalize(g: EigenExpansion, tol: float = 1e-10) -> EigenExpansion:
    """g - g(0) exp(-pi |x|^2) for a +1 eigenfunction with g(0) <= 0."""
    c = g.normalized_coeffs
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if c.size > 1 and np.max(np.abs(c[1::2])) > tol * scale:
        raise ValueError("not a +1 eigenfunction: odd coefficients present")
    g0 = g.value_at_zero()
    if g0 > tol * max(scale, 1.0):
        raise ValueError(f"g(0) = {g0} > 0; the subtraction requires g(0) <= 0")
    a = g.coeffs.copy()
    a[0] -= g0
    return EigenExpansion(g.dim, a)


def a_product(f, sign: int, rtol: float | None = None) -> float:
    """sqrt(A(f) A(sign * F f)): the quantity whose infimum defines the sign constants.

    ``f`` may be an expansion or a sampled profile; ``rtol`` is passed on
    to :func:`last_sign_change`.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if isinstance(f, RadialProfile):
        fh = radial_fourier(f)
        fh = RadialProfile(fh.dim, sign * fh.values, fh.rule)
    else:
        fh = sign * f.fourier()
    a1 = last_sign_change(f, rtol).a_radius
    a2 = last_sign_change(fh, rtol).a_radius
    if a1 == 0.0 or a2 == 0.0:
        return 0.0
    return math.sqrt(a1 * a2)
