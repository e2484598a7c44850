"""The L2 / (L1 x L1) ratio, the inequality chain behind its bound, and the optimizer.

The Gaussian gives 2^{-d/2}; gradient ascent over a small Laguerre-Gaussian
basis climbs above it but never past (2/e)^{d/2}.
"""
from signbound.optimize import maximize_ratio
from signbound.radial import EigenExpansion
from signbound.verify import random_expansion, verify_main

for d in (1, 2, 4, 8):
    gauss = verify_main(EigenExpansion(d, [1.0]))
    rand = verify_main(random_expansion(0, d, 8))
    best = maximize_ratio(d, 8, budget=400, restarts=4, seed=1)
    print(f"d={d}: Gaussian {gauss.ratio:.6f}  random {rand.ratio:.6f}  "
          f"optimized {best.ratio:.6f}  bound {best.bound:.6f}")
    print(f"      worst chain residuals on the random f: Holder {rand.holder_residual:.1e}, "
          f"HY {rand.hy_residual:.1e}, log-convexity {rand.logconvex_residual:.1e}")
