"""Curvature matching against vMF, and geodesics between samples.

Run: python demos/matching_and_interpolation.py
"""

import numpy as np

from spcauchy import (
    SpCauchy,
    curvature_report,
    geodesic_interpolate,
    kappa_of_rho,
    rho_match,
    sample,
)

print("concentration matching (same quadratic curvature at the mode):")
for d in (3, 9, 65):
    rho = rho_match(d, 10.0)
    print(f"  d = {d:>3}: kappa = 10  <->  rho = {rho:.6f}  (round trip {kappa_of_rho(d, rho):.6f})")

print("\nfitted curvature coefficients, d = 8, rho = 0.8:")
print(f"  target kappa(rho) = {kappa_of_rho(8, 0.8):.4f}")
for theta_max in (0.02, 0.01, 0.005, 0.0025):
    rep = curvature_report(8, 0.8, theta_max=theta_max)
    print(
        f"  window {theta_max:<7} c_vmf = {rep.c_vmf:9.4f}  c_spc = {rep.c_spc:9.4f}"
        f"  rel diff = {rep.rel_diff:.2e}"
    )
print("  (the mismatch shrinks like the window squared: the two families")
print("   agree to second order at the mode, but not beyond)")

rng = np.random.default_rng(3)
dist = SpCauchy(np.array([0.0, 0.0, 1.0]), 0.6)
a, b = sample(dist, rng), sample(dist, rng)
print("\ngreat-circle path between two draws (constant angular speed):")
for t in np.linspace(0.0, 1.0, 6):
    p = geodesic_interpolate(a, b, float(t))
    angle = np.degrees(np.arccos(np.clip(a @ p, -1, 1)))
    print(f"  t = {t:.1f}  point = [{p[0]:+.4f} {p[1]:+.4f} {p[2]:+.4f}]  angle from start {angle:6.2f} deg")
