"""Solve the Cohn-Elkies LP in d = 2 and turn the certificate into a -1 witness.

The minimal radius r* is found by bisection; the audit re-checks the
certificate on a finer grid and by root isolation, and g = f^ - f is an
eventually nonnegative -1 eigenfunction with A(g) <= r*.
"""
from signbound import bounds
from signbound.lp import audit, minimal_r
from signbound.sign import last_sign_change

d = 2
cert = minimal_r(d, 16, 1e-4)
rep = audit(cert)
g = cert.function.fourier() - cert.function
print(f"r* = {cert.r_star:.6f}, density bound {cert.density_bound:.6f} (hexagonal packing 0.906900)")
print(f"audit ok: {rep.ok}, A(g) = {last_sign_change(g, 2e-9).a_radius:.6f}, a_lower({d}) = {bounds.a_lower(d):.6f}")
print(cert.to_json()[:300], "...")
