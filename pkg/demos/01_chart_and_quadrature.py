"""Tour of the geometric layer: the frequency chart and sphere quadrature.

Every output frequency eta reachable at fixed incident direction theta lies
in the half space eta . theta < 0, and can be written eta = k(theta' - theta)
for a unique wavenumber k and outgoing direction theta'.  The chart computes
(k, theta') from eta; here we verify the reconstruction numerically and then
look at the product quadrature rules used for the Ewald-sphere integrals.
"""

import numpy as np

from borndisp import Direction, chart, sphere_rule

rng = np.random.default_rng(0)

print("chart round trips")
print("-" * 40)
for n in (2, 3):
    worst = 0.0
    for _ in range(500):
        theta = Direction.normalized(rng.normal(size=n))
        eta = rng.normal(size=n) * rng.uniform(0.1, 20.0)
        if eta @ theta.components >= 0:
            eta = -eta
        ch = chart(eta, theta)
        recon = ch.k * (ch.theta_prime.components - theta.components)
        worst = max(worst, np.linalg.norm(recon - eta) / np.linalg.norm(eta))
    print(f"  n = {n}: max relative reconstruction error {worst:.2e}")

# Backscattering is the boundary case: theta' = -theta, so |eta| = 2k.
theta = Direction(np.array([-1.0, 0.0]))
eta = np.array([6.0, 0.0])
ch = chart(eta, theta)
print(f"\nbackscattering example: eta = {eta}, k = {ch.k}, "
      f"theta' = {ch.theta_prime.components}")

print("\nsphere quadrature convergence (integral of (1 + x_1^2) over S^{n-1})")
print("-" * 40)
for n, exact in ((2, 3 * np.pi), (3, 4 * np.pi * (1 + 1 / 3))):
    for level in (1, 2, 3):
        rule = sphere_rule(n, level)
        val = float(rule.weights @ (1 + rule.nodes[:, 0] ** 2))
        print(f"  n = {n}, level {level} ({rule.nodes.shape[0]:4d} nodes): "
              f"error {abs(val - exact):.2e}")
