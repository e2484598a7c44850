"""Radial functions on R^d, their Fourier transform and L^p norms.

Radial functions are represented in two ways:

* :class:`EigenExpansion` -- coefficients a_k of the Laguerre-Gaussian
  functions psi_k(r) = L_k^(d/2-1)(2 pi r^2) exp(-pi r^2).  With the
  unitary normalisation exp(-2 pi i <x, w>) these satisfy
  F psi_k = (-1)^k psi_k, so the transform just flips odd coefficients.
* :class:`RadialProfile` -- samples on the radii of a generalized
  Gauss-Laguerre rule in the variable t = 2 pi r^2.

Integrals over R^d reduce to |S^{d-1}| times a radial integral.  Norms of
sign-changing functions are integrated segment by segment between the
sign changes of the polynomial factor, with double-exponential rules that
tolerate the |f|^p kink at each root.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .numerics import gauss_laguerre, laguerre_functions, log_gamma, log_sphere_area, QuadratureRule

__all__ = [
    "EigenExpansion",
    "RadialProfile",
    "ResolutionWarning",
    "DEFAULT_ORDER",
    "PROJECTION_TOLERANCE",
    "default_rule",
    "eigen_to_profile",
    "project",
    "radial_fourier",
    "norm_l1",
    "norm_l2_sq",
    "norm_lp",
    "norm_sup",
    "parseval_residual",
    "sign_change_roots",
    "hankel_transform",
]

DEFAULT_ORDER = 256
PROJECTION_TOLERANCE = 1e-6
# coefficients this small relative to the largest one are treated as zero in root
# isolation; keeping them would put roots beyond the range of double precision
NEGLIGIBLE = 1e-300
TWO_PI = 2.0 * math.pi


class ResolutionWarning(UserWarning):
    """A profile is not resolvable by the eigenbasis at the rule's order."""


def _alpha(dim: int) -> float:
    return 0.5 * dim - 1.0


@lru_cache(maxsize=None)
def _norm_factors(dim: int, n: int) -> np.ndarray:
    # h_k = sqrt(Gamma(k + alpha + 1) / k!), psi_k = h_k phi_k
    alpha = _alpha(dim)
    k = np.arange(n)
    out = np.array([math.exp(0.5 * (log_gamma(kk + alpha + 1.0) - math.lgamma(kk + 1.0))) for kk in k])
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class EigenExpansion:
    """f(r) = sum_k coeffs[k] * psi_k(r) in dimension ``dim``."""

    dim: int
    coeffs: np.ndarray

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")
        c = np.array(self.coeffs, dtype=float).ravel()
        if c.size == 0:
            raise ValueError("an expansion needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "coeffs", c)

    @property
    def alpha(self) -> float:
        return _alpha(self.dim)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def normalized_coeffs(self) -> np.ndarray:
        """Coefficients against the orthonormal Laguerre functions phi_k."""
        return self.coeffs * _norm_factors(self.dim, self.coeffs.size)

    @classmethod
    def from_normalized(cls, dim: int, c) -> "EigenExpansion":
        c = np.asarray(c, dtype=float)
        return cls(dim, c / _norm_factors(dim, c.size))

    @classmethod
    def gaussian(cls, dim: int) -> "EigenExpansion":
        return cls(dim, [1.0])

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def trimmed(self, rtol: float = 0.0) -> "EigenExpansion":
        """Drop trailing coefficients that are zero (or below ``rtol`` relative, normalized)."""
        c = self.normalized_coeffs
        cutoff = rtol * np.max(np.abs(c)) if c.size else 0.0
        keep = np.flatnonzero(np.abs(c) > cutoff)
        n = keep[-1] + 1 if keep.size else 1
        return EigenExpansion(self.dim, self.coeffs[:n])

    def fourier(self) -> "EigenExpansion":
        signs = np.where(np.arange(self.coeffs.size) % 2 == 0, 1.0, -1.0)
        return EigenExpansion(self.dim, self.coeffs * signs)

    def __call__(self, r):
        return self.evaluate(r)

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        t = TWO_PI * np.atleast_1d(r) ** 2
        vals = self.normalized_coeffs @ laguerre_functions(self.coeffs.size, self.alpha, t)
        return vals.reshape(r.shape) if r.ndim else float(vals[0])

    def value_at_zero(self) -> float:
        # L_k^(alpha)(0) = binom(k + alpha, k)
        k = np.arange(self.coeffs.size)
        alpha = self.alpha
        lk0 = np.exp([log_gamma(kk + alpha + 1.0) - log_gamma(alpha + 1.0) - math.lgamma(kk + 1.0) for kk in k])
        return float(np.dot(self.coeffs, lk0))

    def integral(self) -> float:
        """Integral of f over R^d, i.e. the transform at the origin."""
        return self.fourier().value_at_zero()

    def leading_sign(self) -> int:
        """Sign of f(r) as r -> infinity (sign of the top coefficient times (-1)^N)."""
        e = self.trimmed(NEGLIGIBLE)
        top = e.coeffs[-1]
        if top == 0:
            return 0
        return int(np.sign(top) * (-1) ** e.degree)

    def __add__(self, other: "EigenExpansion") -> "EigenExpansion":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n)
        a[: self.coeffs.size] += self.coeffs
        a[: other.coeffs.size] += other.coeffs
        return EigenExpansion(self.dim, a)

    def __neg__(self) -> "EigenExpansion":
        return EigenExpansion(self.dim, -self.coeffs)

    def __sub__(self, other: "EigenExpansion") -> "EigenExpansion":
        return self + (-other)

    def __mul__(self, c: float) -> "EigenExpansion":
        return EigenExpansion(self.dim, self.coeffs * float(c))

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {"dim": self.dim, "coeffs": [float(x) for x in self.coeffs]}

    @classmethod
    def from_dict(cls, d: dict) -> "EigenExpansion":
        return cls(int(d["dim"]), d["coeffs"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "EigenExpansion":
        return cls.from_dict(json.loads(s))


def default_rule(dim: int, order: int | None = None) -> QuadratureRule:
    """Gauss-Laguerre rule for dimension ``dim``; ``order`` defaults to the module-level DEFAULT_ORDER."""
    return gauss_laguerre(DEFAULT_ORDER if order is None else int(order), _alpha(dim))


@dataclass(frozen=True)
class RadialProfile:
    """Samples f(r_i) on the radii r_i = sqrt(t_i / 2 pi) of a Gauss-Laguerre rule."""

    dim: int
    values: np.ndarray
    rule: QuadratureRule = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dim!r}")
        if v.size != self.rule.order:
            raise ValueError(f"{v.size} values for a rule of order {self.rule.order}")
        if not np.all(np.isfinite(v)):
            raise ValueError("profile values must be finite")
        if abs(self.rule.alpha - _alpha(self.dim)) > 1e-12:
            raise ValueError(f"rule alpha {self.rule.alpha} does not match d/2 - 1 = {_alpha(self.dim)}")
        v.setflags(write=False)
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "values", v)

    @property
    def radii(self) -> np.ndarray:
        return np.sqrt(self.rule.nodes / TWO_PI)

    @classmethod
    def from_function(cls, dim: int, func, order: int | None = None) -> "RadialProfile":
        rule = default_rule(dim, order)
        return cls(dim, func(np.sqrt(rule.nodes / TWO_PI)), rule)

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        self._check_compatible(other)
        return RadialProfile(self.dim, self.values + other.values, self.rule)

    def __sub__(self, other: "RadialProfile") -> "RadialProfile":
        self._check_compatible(other)
        return RadialProfile(self.dim, self.values - other.values, self.rule)

    def __mul__(self, c: float) -> "RadialProfile":
        return RadialProfile(self.dim, self.values * float(c), self.rule)

    __rmul__ = __mul__

    def _check_compatible(self, other):
        if self.dim != other.dim or self.rule.order != other.rule.order:
            raise ValueError("profiles live on different grids")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "radii": [float(x) for x in self.radii],
            "values": [float(x) for x in self.values],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RadialProfile":
        dim = int(d["dim"])
        values = np.asarray(d["values"], dtype=float)
        rule = default_rule(dim, values.size)
        radii = np.asarray(d.get("radii", np.sqrt(rule.nodes / TWO_PI)), dtype=float)
        if not np.allclose(radii, np.sqrt(rule.nodes / TWO_PI), rtol=1e-12, atol=0):
            raise ValueError("radii do not match the Gauss-Laguerre grid of this order")
        return cls(dim, values, rule)


def eigen_to_profile(e: EigenExpansion, rule: QuadratureRule | None = None) -> RadialProfile:
    """Sample an expansion on the radii of ``rule``."""
    if rule is None:
        rule = default_rule(e.dim)
    if abs(rule.alpha - e.alpha) > 1e-12:
        raise ValueError(f"rule alpha {rule.alpha} does not match expansion alpha {e.alpha}")
    vals = e.normalized_coeffs @ laguerre_functions(e.coeffs.size, e.alpha, rule.nodes)
    return RadialProfile(e.dim, vals, rule)


@lru_cache(maxsize=32)
def _projection_matrix(order: int, alpha: float) -> np.ndarray:
    rule = gauss_laguerre(order, alpha)
    phi = laguerre_functions(order, alpha, rule.nodes)
    m = phi * rule.scaled_weights[None, :]
    m.setflags(write=False)
    return m


def project(f: RadialProfile) -> tuple[EigenExpansion, float]:
    """Project a profile onto psi_0..psi_{order-1}.

    Returns the expansion and a resolution residual: the relative L^2 mass
    in the top eighth of the coefficients.  A large residual means the
    profile is not resolved at this order.
    """
    m = _projection_matrix(f.rule.order, f.rule.alpha)
    c = m @ f.values
    total = float(np.linalg.norm(c))
    tail = float(np.linalg.norm(c[c.size - max(1, c.size // 8):])) if c.size > 1 else 0.0
    residual = tail / total if total > 0 else 0.0
    return EigenExpansion.from_normalized(f.dim, c), residual


def radial_fourier(f: RadialProfile, tolerance: float = PROJECTION_TOLERANCE) -> RadialProfile:
    """Fourier transform of a radial profile, sampled on the same grid."""
    e, residual = project(f)
    if residual > tolerance:
        warnings.warn(
            f"profile not resolved by the order-{f.rule.order} eigenbasis "
            f"(projection residual {residual:.3e} > {tolerance:.1e})",
            ResolutionWarning,
            stacklevel=2,
        )
    return eigen_to_profile(e.fourier(), f.rule)


# ---------------------------------------------------------------------------
# sign changes of the polynomial factor
# ---------------------------------------------------------------------------


def _comrade_roots(e: EigenExpansion) -> np.ndarray:
    """Eigenvalues of the comrade matrix of P(t) = sum_k c_k p_k(t) (orthonormal basis)."""
    c = e.normalized_coeffs
    n = c.size - 1
    if n < 1:
        return np.empty(0, dtype=complex)
    alpha = e.alpha
    k = np.arange(n)
    b = np.sqrt(np.arange(1, n + 1) * (np.arange(1, n + 1) + alpha))  # b_1..b_n
    mat = np.diag(2.0 * k + 1.0 + alpha)
    if n > 1:
        mat[k[1:], k[:-1]] = -b[:-1]
        mat[k[:-1], k[1:]] = -b[:-1]
    mat[n - 1, :] += b[n - 1] * c[:n] / c[n]
    return np.linalg.eigvals(mat)


def _root_bound(e: EigenExpansion) -> float:
    """Upper bound on |t| for every root (Gershgorin on the comrade matrix)."""
    c = e.trimmed(NEGLIGIBLE).normalized_coeffs
    n = c.size - 1
    if n < 1:
        return 0.0
    alpha = e.alpha
    b = np.sqrt(np.arange(0, n + 1) * (np.arange(0, n + 1) + alpha))
    k = np.arange(n)
    rows = np.abs(2.0 * k + 1.0 + alpha) + b[k] + np.where(k < n - 1, b[np.minimum(k + 1, n)], 0.0)
    last = abs(2.0 * (n - 1) + 1.0 + alpha) + b[n - 1] + b[n] * float(np.sum(np.abs(c[:n]))) / abs(c[n])
    rows[n - 1] = max(rows[n - 1], last)
    return float(np.max(rows))


def sign_change_roots(e: EigenExpansion) -> np.ndarray:
    """Values t > 0 where P(t) changes sign, refined to ~1e-12 in t.

    Candidates come from the comrade-matrix eigenvalues; the sign is then
    evaluated between consecutive candidates and every bracket with a sign
    change is refined by a bracketing root finder.  Tangential roots (no
    sign change) are deliberately ignored.
    """
    e = e.trimmed(NEGLIGIBLE)
    if e.degree < 1:
        return np.empty(0)
    eig = _comrade_roots(e)
    cand = np.sort(eig.real[(np.abs(eig.imag) <= 1e-5 * np.maximum(1.0, np.abs(eig.real))) & (eig.real > -1.0)])
    tmax = 1.05 * _root_bound(e) + 1.0
    cand = cand[(cand > 0) & (cand < tmax)]
    # separators: midpoints between candidates, plus a scan grid as a safety net
    scan = np.linspace(0.0, 1.0, 4 * e.degree + 9) ** 2 * min(tmax, 4.0 * e.degree + 2 * abs(e.alpha) + 40.0)
    # tight brackets around each candidate let the refinement finish in a few steps
    delta = 1e-8 * np.maximum(cand, 1.0)
    pts = np.unique(np.concatenate(([0.0], scan, 0.5 * (cand[:-1] + cand[1:]), cand - delta, cand + delta, [tmax])))
    pts = pts[(pts >= 0.0) & (pts <= tmax)]
    c = e.normalized_coeffs

    def poly(t):
        return _poly_values(c, e.alpha, np.atleast_1d(np.asarray(t, dtype=float)))

    vals = poly(pts)
    s = np.sign(vals)
    nz = np.flatnonzero(s != 0)
    i0, i1 = nz[:-1], nz[1:]
    flip = s[i0] != s[i1]
    i0, i1 = i0[flip], i1[flip]
    # a zero separator strictly inside a bracket is itself the root
    exact = i1 - i0 > 1
    roots = list(pts[i0[exact] + 1])
    i0, i1 = i0[~exact], i1[~exact]
    roots.extend(_refine_brackets(poly, pts[i0], pts[i1], vals[i0], vals[i1]))
    return np.sort(np.array(roots, dtype=float))


def _poly_values(c: np.ndarray, alpha: float, t: np.ndarray, damped: bool = False) -> np.ndarray:
    """P(t) = sum_k c_k p_k(t); overflow saturates to +-inf.

    With ``damped`` the factor exp(-t/2) is applied inside the log-scale, so
    the result is the function value itself and never overflows.
    """
    prev = np.zeros_like(t)
    cur = np.full_like(t, math.exp(-0.5 * log_gamma(alpha + 1.0)))
    acc = c[0] * cur
    logscale = np.zeros_like(t)
    for k in range(c.size - 1):
        prev, cur = cur, ((2 * k + 1 + alpha - t) * cur - math.sqrt(k * (k + alpha)) * prev) / math.sqrt(
            (k + 1) * (k + alpha + 1)
        )
        acc += c[k + 1] * cur
        big = np.abs(cur) > 1e150
        if big.any():
            sc = np.abs(cur[big])
            cur[big] /= sc
            prev[big] /= sc
            acc[big] /= sc
            logscale[big] += np.log(sc)
    if damped:
        return acc * np.exp(logscale - 0.5 * t)
    with np.errstate(over="ignore", invalid="ignore"):
        out = acc * np.exp(np.minimum(logscale, 800.0))
    return np.where(acc == 0.0, 0.0, out)


def _refine_brackets(func, a, b, fa, fb, xtol=1e-13, maxiter=400):
    """Vectorised Illinois iteration with a bisection every third step.

    All brackets share one evaluation per step, which keeps high degree
    polynomials with hundreds of sign changes cheap.
    """
    a, b, fa, fb = (np.array(x, dtype=float) for x in (a, b, fa, fb))
    out = np.empty(a.size)
    active = np.arange(a.size)
    side = np.zeros(a.size, dtype=int)
    xprev = np.full(a.size, np.nan)
    for it in range(maxiter):
        if active.size == 0:
            break
        aa, bb, ffa, ffb = a[active], b[active], fa[active], fb[active]
        if it % 3 == 2:
            x = 0.5 * (aa + bb)
        else:
            with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
                x = (aa * ffb - bb * ffa) / (ffb - ffa)
            bad = ~((x > aa) & (x < bb))
            x[bad] = 0.5 * (aa[bad] + bb[bad])
        fx = func(x)
        left = np.sign(fx) == np.sign(ffa)
        # Illinois: halve the stale endpoint value when the same side survives twice
        sd = side[active]
        fa_new = np.where(left, fx, np.where(sd == -1, 0.5 * ffa, ffa))
        fb_new = np.where(left, np.where(sd == 1, 0.5 * ffb, ffb), fx)
        a[active] = np.where(left, x, aa)
        b[active] = np.where(left, bb, x)
        fa[active], fb[active] = fa_new, fb_new
        side[active] = np.where(left, 1, -1)
        tol = xtol + 4 * np.finfo(float).eps * np.abs(x)
        stalled = np.abs(x - xprev[active]) <= tol
        xprev[active] = x
        done = (fx == 0.0) | stalled | (b[active] - a[active] <= tol)
        out[active[done]] = np.where((fx[done] == 0.0) | stalled[done], x[done],
                                     0.5 * (a[active[done]] + b[active[done]]))
        active = active[~done]
    else:
        out[active] = 0.5 * (a[active] + b[active])
    return out


# ---------------------------------------------------------------------------
# segmented double-exponential quadrature
# ---------------------------------------------------------------------------

_DE_STEP = 1.0 / 16.0
_DE_TAIL_STEP = 1.0 / 24.0
_MAX_PANEL = 0.5


@lru_cache(maxsize=None)
def _tanh_sinh_reference():
    u = np.arange(-3.25, 3.25 + 1e-12, _DE_STEP)
    v = 0.5 * math.pi * np.sinh(u)
    # distance of each node from the nearer endpoint of [-1, 1], computed without cancellation
    gap = 2.0 / (np.exp(2.0 * np.abs(v)) + 1.0)
    w = _DE_STEP * 0.5 * math.pi * np.cosh(u) / np.cosh(v) ** 2
    keep = (w > 1e-300) & (gap > 0)
    return v[keep], gap[keep], w[keep]


@lru_cache(maxsize=None)
def _exp_sinh_reference():
    h = _DE_TAIL_STEP
    u = np.arange(-4.5, 3.5 + 1e-12, h)
    v = 0.5 * math.pi * np.sinh(u)
    x = np.exp(v)
    w = h * 0.5 * math.pi * np.cosh(u) * x
    keep = (x < 40.0) & (x > 0)
    return x[keep], w[keep]


def _segment_nodes(a: float, b: float):
    v, gap, w = _tanh_sinh_reference()
    half = 0.5 * (b - a)
    x = np.where(v < 0, a + half * gap, b - half * gap)
    return x, half * w


def _tail_nodes(a: float, scale: float = 1.0):
    x, w = _exp_sinh_reference()
    return a + scale * x, scale * w


@dataclass(frozen=True)
class _Partition:
    """Quadrature nodes in r with weights for |S^{d-1}| r^{d-1} dr, and f at the nodes."""

    dim: int
    r: np.ndarray
    w: np.ndarray
    f: np.ndarray
    roots: np.ndarray

    def lp(self, p: float) -> float:
        if math.isinf(p):
            return float(np.max(np.abs(self.f)))
        return float(np.dot(self.w, np.abs(self.f) ** p)) ** (1.0 / p)


@lru_cache(maxsize=4096)
def _partition_cached(dim: int, key: bytes) -> _Partition:
    e = EigenExpansion(dim, np.frombuffer(key, dtype=float))
    return _build_partition(e)


def _near_axis_points(e: EigenExpansion) -> np.ndarray:
    # complex roots close to the positive axis make |f|^p nearly singular
    eig = _comrade_roots(e.trimmed(NEGLIGIBLE))
    keep = (eig.real > 0) & (np.abs(eig.imag) <= 0.5 * np.sqrt(np.maximum(eig.real, 1.0)) + 0.5)
    return np.unique(eig.real[keep])


def _build_partition(e: EigenExpansion) -> _Partition:
    roots_t = sign_change_roots(e)
    roots_r = np.sqrt(roots_t / TWO_PI)
    # past t_cap the Gaussian factor underflows any polynomial of this degree,
    # so far-out roots are kept in the report but not used as breakpoints
    t_cap = 3500.0 + 40.0 * e.degree
    extra = _near_axis_points(e)
    extra = np.sqrt(extra[extra < t_cap] / TWO_PI)
    edges_r = roots_r[roots_t < t_cap]
    edges = np.unique(np.concatenate(([0.0], edges_r, extra)))
    # oscillatory region of psi_N ends near t = 4N + 2 alpha + 2; cover it with short panels
    r_end = max(edges[-1], math.sqrt((4.0 * e.degree + 2.0 * abs(e.alpha) + 10.0) / TWO_PI)) + 1.0
    edges = np.concatenate((edges, [r_end]))
    # merge breakpoints closer than the rules can usefully separate
    edges = edges[np.concatenate(([True], np.diff(edges) > 1e-9))]
    rs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        pieces = max(1, int(math.ceil((b - a) / _MAX_PANEL)))
        for lo, hi in zip(np.linspace(a, b, pieces + 1)[:-1], np.linspace(a, b, pieces + 1)[1:]):
            x, w = _segment_nodes(lo, hi)
            rs.append(x)
            ws.append(w)
    x, w = _tail_nodes(edges[-1])
    rs.append(x)
    ws.append(w)
    r = np.concatenate(rs)
    w = np.concatenate(ws)
    d = e.dim
    w = w * np.exp(log_sphere_area(d)) * r ** (d - 1)
    f = e.evaluate(r)
    return _Partition(d, r, w, f, roots_r)


def _partition(e: EigenExpansion) -> _Partition:
    e = e.trimmed()
    return _partition_cached(e.dim, e.coeffs.tobytes())


def _as_expansion(f) -> EigenExpansion:
    if isinstance(f, EigenExpansion):
        return f
    if isinstance(f, RadialProfile):
        e, _ = project(f)
        return e.trimmed(1e-14)
    raise TypeError(f"expected EigenExpansion or RadialProfile, got {type(f).__name__}")


def norm_lp(f, p: float) -> float:
    """L^p norm over R^d; any p >= 1, including ``math.inf``."""
    if not p >= 1.0:
        raise ValueError(f"p must be >= 1, got {p!r}")
    e = _as_expansion(f)
    if e.is_zero():
        return 0.0
    if math.isinf(p):
        return norm_sup(e)
    return _partition(e).lp(float(p))


def norm_l1(f) -> float:
    """|S^{d-1}| times the integral of |f(r)| r^{d-1} over (0, inf)."""
    return norm_lp(f, 1.0)


def norm_l2_sq(f) -> float:
    """Squared L^2 norm.

    For expansions this is exact from the coefficients; for profiles the
    Gauss-Laguerre rule is applied to the samples directly.
    """
    if isinstance(f, EigenExpansion):
        c = f.normalized_coeffs
        return float(math.exp(-0.5 * f.dim * math.log(2.0) - log_gamma(0.5 * f.dim)) * np.dot(c, c))
    if isinstance(f, RadialProfile):
        # |S^{d-1}| * (1/2)(2 pi)^{-d/2} * sum W_i (f_i e^{t_i/2})^2 e^{-t_i} ... with W = w e^t
        w = f.rule.scaled_weights
        scale = math.exp(-0.5 * f.dim * math.log(2.0) - log_gamma(0.5 * f.dim))
        return float(scale * np.dot(w, f.values**2))
    raise TypeError(f"expected EigenExpansion or RadialProfile, got {type(f).__name__}")


def norm_sup(f) -> float:
    """sup |f| over R^d: largest sampled value refined by a bounded local search."""
    e = _as_expansion(f)
    if e.is_zero():
        return 0.0
    part = _partition(e)
    order = np.argsort(part.r)
    r = part.r[order]
    v = np.abs(part.f[order])
    grid = np.linspace(0.0, max(float(r[-1]), 1.0), 2001)
    gv = np.abs(e.evaluate(grid))
    cand_r = np.concatenate((r, grid))
    cand_v = np.concatenate((v, gv))
    i = int(np.argmax(cand_v))
    best = float(cand_v[i])
    r0 = float(cand_r[i])
    span = grid[1] - grid[0]
    lo, hi = max(0.0, r0 - span), r0 + span
    res = minimize_scalar(lambda x: -abs(e.evaluate(x)), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return max(best, float(-res.fun), abs(e.evaluate(0.0)))


def parseval_residual(f: RadialProfile) -> float:
    """Relative difference of the squared L^2 norms of f and its transform."""
    a = norm_l2_sq(f)
    if a == 0:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        b = norm_l2_sq(radial_fourier(f))
    return abs(a - b) / a


def hankel_transform(func, rho, dim: int, r_max: float = 12.0, nodes: int = 4000) -> np.ndarray:
    """Fourier transform of a radial function by direct Bessel quadrature.

    F(rho) = 2 pi rho^{1 - d/2} int_0^inf f(r) J_{d/2-1}(2 pi r rho) r^{d/2} dr,
    evaluated with composite Gauss-Legendre panels on [0, r_max].  Independent
    of the eigenbasis; used as a cross-check.
    """
    from scipy.special import jv

    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    nu = 0.5 * dim - 1.0
    x, w = np.polynomial.legendre.leggauss(16)
    panels = max(1, nodes // 16)
    edges = np.linspace(0.0, r_max, panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    r = (0.5 * (b - a) * x[None, :] + 0.5 * (a + b)).ravel()
    wr = (0.5 * (b - a) * w[None, :]).ravel()
    fr = np.asarray(func(r), dtype=float)
    out = np.empty_like(rho)
    for i, q in enumerate(rho):
        if q == 0.0:
            out[i] = math.exp(log_sphere_area(dim)) * np.dot(wr, fr * r ** (dim - 1))
        else:
            out[i] = TWO_PI * q ** (1.0 - 0.5 * dim) * np.dot(wr, fr * jv(nu, TWO_PI * r * q) * r ** (0.5 * dim))
    return out
