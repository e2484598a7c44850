"""Special functions and generalized Gauss-Laguerre quadrature.

Everything dimension dependent is kept in log-space; callers exponentiate
only when reporting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import zeta

__all__ = [
    "QuadratureRule",
    "QuadratureError",
    "log_gamma",
    "log_unit_ball_volume",
    "log_sphere_area",
    "laguerre_eval",
    "laguerre_functions",
    "gauss_laguerre",
]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_EULER_GAMMA = 0.57721566490153286061

# Taylor coefficients of ln Gamma(1 + z) = -gamma z + sum_k (-1)^k zeta(k) z^k / k
_SERIES_TERMS = 40
_SERIES_COEFFS = tuple(
    (-1.0) ** k * float(zeta(k)) / k for k in range(2, _SERIES_TERMS + 2)
)
_SERIES_RADIUS = 0.25


class QuadratureError(RuntimeError):
    """Root finding for quadrature nodes failed to converge."""


def _lngamma_series_near_one(z: float) -> float:
    # ln Gamma(1 + z) for |z| <= 0.25; Horner on the zeta series.
    acc = 0.0
    for c in reversed(_SERIES_COEFFS):
        acc = acc * z + c
    return z * (-_EULER_GAMMA + z * acc)


def _lngamma_lanczos(x: float) -> float:
    z = x - 1.0
    a = _LANCZOS_P[0]
    for i in range(1, len(_LANCZOS_P)):
        a += _LANCZOS_P[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(a)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for real ``x > 0``.

    Lanczos approximation with recurrence shifts; around the zeros of
    ln Gamma (x = 1, 2) a zeta-function Taylor series keeps the relative
    error small.
    """
    x = float(x)
    if not x > 0.0 or math.isnan(x):
        raise ValueError(f"log_gamma domain error: x must be > 0, got {x!r}")
    if math.isinf(x):
        return math.inf
    if abs(x - 1.0) <= _SERIES_RADIUS:
        return _lngamma_series_near_one(x - 1.0)
    if abs(x - 2.0) <= _SERIES_RADIUS:
        z = x - 2.0
        return _lngamma_series_near_one(z) + math.log1p(z)
    if x < 0.5:
        # Gamma(x) = Gamma(x + 1) / x
        return log_gamma(x + 1.0) - math.log(x)
    return _lngamma_lanczos(x)


def log_unit_ball_volume(d: int) -> float:
    """ln |B_1| = (d/2) ln(pi) - ln Gamma(d/2 + 1)."""
    d = _check_dim(d)
    return 0.5 * d * math.log(math.pi) - log_gamma(0.5 * d + 1.0)


def log_sphere_area(d: int) -> float:
    """ln |S^{d-1}| = ln 2 + (d/2) ln(pi) - ln Gamma(d/2)."""
    d = _check_dim(d)
    return math.log(2.0) + 0.5 * d * math.log(math.pi) - log_gamma(0.5 * d)


def _check_dim(d) -> int:
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


def laguerre_eval(k: int, alpha: float, t):
    """Generalized Laguerre polynomial L_k^(alpha)(t) by the three-term recurrence.

    ``t`` may be a scalar or an array; the result has the same shape.
    """
    if k < 0 or int(k) != k:
        raise ValueError(f"degree must be a nonnegative integer, got {k!r}")
    if not alpha > -1.0:
        raise ValueError(f"alpha must exceed -1, got {alpha!r}")
    t = np.asarray(t, dtype=float)
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    for j in range(int(k)):
        prev, cur = cur, ((2 * j + 1 + alpha - t) * cur - (j + alpha) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def _laguerre_scaled(n: int, alpha: float, t: np.ndarray):
    """Return (L_n / e^s, L_{n-1} / e^s, s) with elementwise log-scale s.

    Rescaling keeps the recurrence finite for large t where L_n itself
    overflows double precision.
    """
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    logscale = np.zeros_like(t)
    for j in range(n):
        prev, cur = cur, ((2 * j + 1 + alpha - t) * cur - (j + alpha) * prev) / (j + 1)
        big = np.abs(cur) > 1e150
        if big.any():
            s = np.abs(cur[big])
            cur[big] /= s
            prev[big] /= s
            logscale[big] += np.log(s)
    return cur, prev, logscale


def laguerre_functions(n: int, alpha: float, t) -> np.ndarray:
    """Orthonormal Laguerre functions phi_k(t), k = 0..n-1, as an (n, len(t)) array.

    phi_k(t) = sqrt(k! / Gamma(k + alpha + 1)) L_k^(alpha)(t) e^{-t/2}, so that
    the integral of phi_j phi_k t^alpha over (0, inf) is the Kronecker delta.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((n, t.size))
    if n == 0:
        return out
    logscale = -0.5 * t - 0.5 * log_gamma(alpha + 1.0)
    prev = np.zeros_like(t)
    cur = np.ones_like(t)
    out[0] = np.exp(logscale)
    for k in range(n - 1):
        nxt = ((2 * k + 1 + alpha - t) * cur - math.sqrt(k * (k + alpha)) * prev) / math.sqrt(
            (k + 1) * (k + alpha + 1)
        )
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e150
        if big.any():
            s = np.abs(cur[big])
            cur[big] /= s
            prev[big] /= s
            logscale[big] += np.log(s)
        out[k + 1] = cur * np.exp(logscale)
    return out


def _log_sum_squares_orthonormal(n: int, alpha: float, t: np.ndarray) -> np.ndarray:
    # log of sum_{k<n} p_k(t)^2, with rescaling so large t does not overflow
    p0 = math.exp(-0.5 * log_gamma(alpha + 1.0))
    prev = np.zeros_like(t)
    cur = np.full_like(t, p0)
    acc = cur * cur
    logscale = np.zeros_like(t)  # values are stored divided by e^logscale
    for k in range(n - 1):
        nxt = ((2 * k + 1 + alpha - t) * cur - math.sqrt(k * (k + alpha)) * prev) / math.sqrt(
            (k + 1) * (k + alpha + 1)
        )
        prev, cur = cur, nxt
        acc += cur * cur
        big = np.abs(cur) > 1e100
        if big.any():
            s = np.abs(cur[big])
            cur[big] /= s
            prev[big] /= s
            acc[big] /= s * s
            logscale[big] += np.log(s)
    return np.log(acc) + 2.0 * logscale


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for integrals of g(t) t^alpha e^{-t} over (0, inf).

    Weights are stored as logarithms because the large-node weights
    underflow double precision at high order.
    """

    alpha: float
    nodes: np.ndarray
    log_weights: np.ndarray
    order: int

    @property
    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights)

    @property
    def scaled_weights(self) -> np.ndarray:
        """w_i e^{t_i}: weights for integrals of h(t) t^alpha with h decaying like e^{-t}."""
        return np.exp(self.log_weights + self.nodes)


@lru_cache(maxsize=64)
def gauss_laguerre(order: int, alpha: float = 0.0) -> QuadratureRule:
    """Generalized Gauss-Laguerre nodes and weights.

    Starting guesses come from the eigenvalues of the Jacobi matrix; each
    node is then polished by Newton's method on L_order^(alpha), falling
    back to bisection inside the bracket formed by the neighbouring guesses.
    """
    if order < 1 or int(order) != order:
        raise ValueError(f"order must be a positive integer, got {order!r}")
    if not alpha > -1.0:
        raise ValueError(f"alpha must exceed -1, got {alpha!r}")
    n = int(order)
    alpha = float(alpha)
    k = np.arange(n)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(np.arange(1, n) * (np.arange(1, n) + alpha))
    guess = np.sort(eigh_tridiagonal(diag, off, eigvals_only=True))

    # Brackets: midpoints between neighbours; roots of L_n are simple and interlace.
    lo = np.empty(n)
    hi = np.empty(n)
    lo[0] = 0.0
    lo[1:] = 0.5 * (guess[:-1] + guess[1:])
    hi[:-1] = lo[1:]
    hi[-1] = guess[-1] + 4.0 * (guess[-1] - lo[-1]) + 10.0

    sign_lo = np.sign(_laguerre_scaled(n, alpha, lo)[0])
    nodes = guess.copy()
    converged = np.zeros(n, dtype=bool)
    prev = np.full(n, np.inf)
    for _ in range(100):
        ln, lnm1, _s = _laguerre_scaled(n, alpha, nodes)
        on_lo_side = np.sign(ln) == sign_lo
        lo = np.where(on_lo_side, np.maximum(lo, nodes), lo)
        hi = np.where(on_lo_side, hi, np.minimum(hi, nodes))
        deriv = (n * ln - (n + alpha) * lnm1) / nodes
        step = ln / deriv
        new = nodes - step
        outside = ~((new >= lo) & (new <= hi)) | ~np.isfinite(new)
        new[outside] = 0.5 * (lo[outside] + hi[outside])
        moved = np.abs(new - nodes)
        # at the rounding floor Newton stops contracting; accept once it does
        stalled = (moved >= 0.5 * prev) & (moved <= 1e-12 * np.abs(nodes))
        converged = converged | (moved <= 1e-14 * np.abs(nodes)) | (ln == 0) | stalled
        prev = moved
        nodes = np.where(converged, nodes, new)
        if converged.all():
            break
    else:
        bad = np.flatnonzero(~converged)
        raise QuadratureError(
            f"Gauss-Laguerre root polishing did not converge (order={n}, alpha={alpha}); "
            f"unconverged node indices {bad[:10].tolist()}, "
            f"last step sizes {np.abs(step[bad[:10]]).tolist()}"
        )
    nodes = np.sort(nodes)
    if not (np.all(np.diff(nodes) > 0) and nodes[0] > 0):
        raise QuadratureError(f"node set not strictly increasing and positive (order={n}, alpha={alpha})")

    # Christoffel numbers: 1 / w_i = sum_k p_k(t_i)^2 over the orthonormal polynomials.
    log_w = -_log_sum_squares_orthonormal(n, alpha, nodes)
    nodes.setflags(write=False)
    log_w.setflags(write=False)
    return QuadratureRule(alpha=alpha, nodes=nodes, log_weights=log_w, order=n)
