"""Closed-form constants per dimension.

Prints the guaranteed lower bound on the last sign change of a -1
eigenfunction, its ratio to sqrt(d), and the LP density floor.  The bound
beats the trivial witness scale once d >= 5.
"""
import math

from signbound import bounds

print(f"{'d':>5} {'a_lower':>10} {'a/sqrt(d)':>10} {'LP floor':>12} threshold")
for d in (1, 2, 3, 4, 5, 8, 16, 64, 256, 1024, 4096):
    r = bounds.bounds_report(d)
    print(f"{d:5d} {r.a_lower:10.5f} {r.a_lower_over_sqrt_d:10.6f} {r.delta_lp_lower:12.4e} {r.threshold_ok}")
print(f"limit of a/sqrt(d): {1 / (2 * math.sqrt(math.pi)):.6f}")
