"""Random -1 eigenfunctions shared by the sign and acceptance tests."""
import numpy as np
from scipy.special import binom

from signbound.radial import EigenExpansion


def eventually_nonneg_minus(rng, d, top=7):
    """Random odd-index expansion whose top coefficient makes it eventually nonnegative.

    psi_k behaves like (-t)^k / k! at infinity, so an odd top index needs a
    negative coefficient.
    """
    a = np.zeros(top + 1)
    a[1::2] = rng.standard_normal(len(a[1::2]))
    a[top] = -abs(a[top])
    return EigenExpansion(d, a)


def admissible_minus(rng, d, top=9):
    """Random -1 eigenfunction with g(0) = 0 that is eventually nonnegative."""
    alpha = d / 2 - 1
    a = np.zeros(top + 1)
    a[3::2] = rng.standard_normal(len(a[3::2]))
    at_zero = np.array([binom(k + alpha, k) for k in range(top + 1)])
    a[1] = -np.dot(a[3:], at_zero[3:]) / at_zero[1]
    if a[top] > 0:
        a = -a
    return EigenExpansion(d, a)
