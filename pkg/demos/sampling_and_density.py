"""Draws from the spherical Cauchy law and what its density says about them.

Run: python demos/sampling_and_density.py
"""

import numpy as np

from spcauchy import SpCauchy, log_density, marginal_cos_density, sample

rng = np.random.default_rng(42)
d, rho = 3, 0.7
dist = SpCauchy(np.array([0.0, 0.0, 1.0]), rho)

draws = sample(dist, rng, 50_000)
print(f"spherical Cauchy on S^{d - 1}, rho = {rho}")
print(f"  max |norm - 1| over 50k draws: {np.abs(np.linalg.norm(draws, axis=1) - 1).max():.2e}")

cos = draws @ dist.mu
print(f"  mean cosine to the mode: {cos.mean():.4f}")
print(f"  5th / 95th cosine percentiles: {np.percentile(cos, 5):.3f} / {np.percentile(cos, 95):.3f}")

print("\nempirical vs analytic density of t = <mu, z>:")
edges = np.linspace(-1, 1, 9)
hist, _ = np.histogram(cos, bins=edges, density=True)
centers = 0.5 * (edges[1:] + edges[:-1])
for c, h in zip(centers, hist):
    print(f"  t = {c:+.3f}   empirical {h:8.4f}   analytic {marginal_cos_density(d, rho, c):8.4f}")

print("\nlog-density (w.r.t. the uniform measure):")
print(f"  at the mode:    {log_density(dist, dist.mu):+.4f}")
print(f"  on the equator: {log_density(dist, np.array([1.0, 0.0, 0.0])):+.4f}")
print(f"  at the antipode:{log_density(dist, -dist.mu):+.4f}")
print("  (at rho = 0 all three would be exactly 0)")
