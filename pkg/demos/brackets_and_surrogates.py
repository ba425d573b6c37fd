"""The analytic envelopes of the KL core and the surrogates living inside.

H_d(z) is pinched between L_d(z) and U(z), two closed-form curves whose gap
w_d = 1/(2(d-1)) + O(1/d^2) vanishes with dimension.  The printout shows
where the true core and the Laplace surrogate sit inside the bracket, and
how the hybrid rule's worst-case error over z peaks at d = 6.

Run: python demos/brackets_and_surrogates.py
"""

import numpy as np

from spcauchy import bracket_width, h_bracket, h_core, run_error_sweep

d = 6
print(f"bracket for d = {d} (width w_d = {bracket_width(d):.6f}):")
print(f"{'z':>6} {'L_d':>10} {'H_d':>10} {'U':>10} {'position':>9} {'laplace':>9}")
for z in (0.0, 0.2, 0.5, 0.8, 0.95, 0.999):
    iv = h_bracket(d, z)
    h = h_core(d, z)
    lap = iv.hi - bracket_width(d) * (z / (2 - z)) ** 2
    pos = (h - iv.lo) / iv.width
    pos_lap = (lap - iv.lo) / iv.width
    print(f"{z:>6} {iv.lo:>10.5f} {h:>10.5f} {iv.hi:>10.5f} {pos:>9.3f} {pos_lap:>9.3f}")
print("(position 1 = upper envelope, 0 = lower; both envelopes are touched")
print(" in the limits z -> 0 and z -> 1, which is what the surrogate exploits)")

print("\nworst-case |KL - hybrid KL| over z, by dimension:")
for point in run_error_sweep(4, 12, dense_points=400):
    bar = "#" * int(400 * point.max_abs_kl_error)
    print(f"  d = {point.d:>2}  {point.max_abs_kl_error:.5f}  {bar}")
print("exact closed forms below d = 6, Laplace surrogate above: the peak")
print("sits at d = 6 and decays with dimension.")
