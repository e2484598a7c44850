"""Gradient ascent on ln ||f||_2^2 - ln ||f||_1 - ln ||f^||_1 over truncated eigen-expansions.

Coordinates are the orthonormal coefficients c, in which ||f||_2^2 is a
fixed multiple of |c|^2 and the transform flips the sign of odd entries.
The L^1 norms are differentiated as integrals of sign(f) times the basis
functions over the sign-segmented partition.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds
from .numerics import laguerre_functions
from .radial import TWO_PI, EigenExpansion, _partition
from .verify import verify_main

__all__ = [
    "OptimizeResult",
    "BoundViolation",
    "log_ratio",
    "log_ratio_gradient",
    "ratio_ascent_step",
    "maximize_ratio",
    "DEFAULT_DEGREE",
    "DEFAULT_RESTARTS",
]

DEFAULT_DEGREE = 12
DEFAULT_RESTARTS = 32
_MIN_STEP = 1e-12
_MAX_STEP = 4.0


class BoundViolation(RuntimeError):
    """An iterate beat (2/e)^{d/2}; since that bound is a theorem, this is a numerics bug."""


def _signed_moments(e: EigenExpansion) -> tuple[float, np.ndarray]:
    # ||f||_1 and its gradient with respect to the orthonormal coefficients
    part = _partition(e)
    basis = laguerre_functions(e.coeffs.size, e.alpha, TWO_PI * part.r**2)
    s = np.sign(part.f) * part.w
    return float(np.dot(part.w, np.abs(part.f))), basis @ s


def log_ratio(f: EigenExpansion) -> float:
    """ln of ||f||_2^2 / (||f||_1 ||f^||_1), with the L^2 norm taken from the coefficients."""
    c = f.normalized_coeffs
    l2 = _l2_factor(f.dim) * float(np.dot(c, c))
    return math.log(l2) - math.log(_partition(f).lp(1.0)) - math.log(_partition(f.fourier()).lp(1.0))


def _l2_factor(d: int) -> float:
    c = EigenExpansion(d, [1.0]).normalized_coeffs[0]
    # ||psi_0||_2^2 = 2^{-d/2}
    return 2.0 ** (-0.5 * d) / (c * c)


def log_ratio_gradient(f: EigenExpansion) -> tuple[float, np.ndarray]:
    """Objective and its gradient in orthonormal coordinates."""
    c = f.normalized_coeffs
    n1, g1 = _signed_moments(f)
    n1h, g1h = _signed_moments(f.fourier())
    flip = np.where(np.arange(c.size) % 2 == 0, 1.0, -1.0)
    cc = float(np.dot(c, c))
    value = math.log(_l2_factor(f.dim) * cc) - math.log(n1) - math.log(n1h)
    grad = 2.0 * c / cc - g1 / n1 - flip * g1h / n1h
    return value, grad


def _unit(d: int, c: np.ndarray) -> EigenExpansion:
    return EigenExpansion.from_normalized(d, c / np.linalg.norm(c))


def _ascend(f: EigenExpansion, step: float, value: float, grad: np.ndarray):
    """Backtracking from ``step``; returns (new f, new value, accepted step) or (f, value, 0.0)."""
    c = f.normalized_coeffs
    c = c / np.linalg.norm(c)
    # scale invariance: the gradient is orthogonal to c, so move along it and renormalize
    while step >= _MIN_STEP:
        trial = c + step * grad
        if np.any(trial):
            g = _unit(f.dim, trial)
            v = log_ratio(g)
            if v > value:
                return g, v, step
        step *= 0.5
    return f, value, 0.0


def ratio_ascent_step(f: EigenExpansion, step: float) -> EigenExpansion:
    """One backtracking gradient step on the log ratio; the result has unit coefficient norm.

    ``step == 0`` returns ``f`` unchanged.  If no step down to 1e-12 increases
    the ratio, ``f`` is returned unchanged as well.
    """
    if step < 0:
        raise ValueError(f"step must be nonnegative, got {step!r}")
    if step == 0 or f.is_zero():
        return f
    value, grad = log_ratio_gradient(f)
    return _ascend(f, float(step), value, grad)[0]


@dataclass(frozen=True)
class OptimizeResult:
    dim: int
    degree: int
    best: EigenExpansion
    ratio: float
    bound: float
    gaussian_ratio: float
    restarts: int
    iterations: int
    budget: int
    seed: int
    best_restart: int

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "best": self.best.to_dict(),
            "ratio": self.ratio,
            "bound": self.bound,
            "gaussian_ratio": self.gaussian_ratio,
            "restarts": self.restarts,
            "iterations": self.iterations,
            "budget": self.budget,
            "seed": self.seed,
            "best_restart": self.best_restart,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "OptimizeResult":
        d = dict(d)
        d["best"] = EigenExpansion.from_dict(d["best"])
        return cls(**d)


def _run(d: int, c0: np.ndarray, iters: int, cap: float):
    f = _unit(d, c0)
    value, grad = log_ratio_gradient(f)
    step, used = 0.5, 0
    history = [value]
    while used < iters:
        used += 1
        g, v, accepted = _ascend(f, step, value, grad)
        if accepted == 0.0:
            break
        if v > cap:
            raise BoundViolation(f"ratio exp({v}) exceeds (2/e)^(d/2) in d={d}: {g.to_json()}")
        f, value = g, v
        history.append(v)
        step = min(2.0 * accepted, _MAX_STEP)
        value, grad = log_ratio_gradient(f)
    return f, value, used


def maximize_ratio(d: int, N: int = DEFAULT_DEGREE, budget: int = 1000, restarts: int = DEFAULT_RESTARTS,
                   seed: int = 0, threads: int = 1) -> OptimizeResult:
    """Best ratio found by multistart gradient ascent over sum_{k<=N} a_k psi_k.

    ``budget`` is the total number of ascent iterations, shared evenly by the
    restarts.  Restart 0 starts at the Gaussian; the others start from
    standard normal coefficient vectors drawn from ``seed``.  The winner is
    re-evaluated through :func:`verify_main`, whose ratio is the one reported.
    """
    if N < 0 or int(N) != N:
        raise ValueError(f"N must be a nonnegative integer, got {N!r}")
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget!r}")
    restarts = max(1, int(restarts))
    n = int(N) + 1
    bound = math.exp(bounds.theorem2_constant(d))
    cap = bounds.theorem2_constant(d) + math.log1p(1e-9)
    per = max(1, budget // restarts)
    children = np.random.SeedSequence(seed).spawn(restarts)

    def start(i):
        if i == 0:
            c = np.zeros(n)
            c[0] = 1.0
            return c
        rng = np.random.default_rng(children[i])
        while True:
            c = rng.standard_normal(n)
            if np.any(c):
                return c

    def work(i):
        if n == 1:
            f = EigenExpansion(d, [1.0])
            return i, f, log_ratio(f), 0
        return (i, *_run(d, start(i), per, cap))

    if threads <= 1:
        runs = [work(i) for i in range(restarts)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(work, range(restarts)))
    # highest ratio wins; ties go to the lower restart index
    i_best, f_best, _, _ = max(runs, key=lambda r: (r[2], -r[0]))
    report = verify_main(f_best)
    if report.ratio > bound * (1.0 + 1e-9):
        raise BoundViolation(f"verified ratio {report.ratio} exceeds {bound} in d={d}: {f_best.to_json()}")
    return OptimizeResult(
        dim=d,
        degree=int(N),
        best=f_best,
        ratio=report.ratio,
        bound=bound,
        gaussian_ratio=2.0 ** (-0.5 * d),
        restarts=restarts,
        iterations=sum(r[3] for r in runs),
        budget=int(budget),
        seed=seed,
        best_restart=i_best,
    )
